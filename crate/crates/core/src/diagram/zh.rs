//! Zh constructions on virtual braid words.

use super::{Color, DiagramError, PrismaticBraidWord, SymplecticPalette, Token};

fn require_virtual(vb: &PrismaticBraidWord) -> Result<(), DiagramError> {
    if vb.has_lambda() {
        return Err(DiagramError::Unsupported("Zh input must be a plain virtual braid".into()));
    }
    Ok(())
}

/// Each `χ_i` becomes `λ_{i,ω}^-1 χ_i λ_{i,ω}`, all decorations in the single color ω.
pub fn homology_zh(vb: &PrismaticBraidWord) -> Result<PrismaticBraidWord, DiagramError> {
    require_virtual(vb)?;
    let mut tokens = Vec::with_capacity(vb.tokens.len() + 2 * vb.virtual_count());
    for t in &vb.tokens {
        match *t {
            Token::Chi { i } => tokens.extend([
                Token::Lambda { j: i, color: Color::Omega, positive: false },
                *t,
                Token::Lambda { j: i, color: Color::Omega, positive: true },
            ]),
            _ => tokens.push(*t),
        }
    }
    Ok(PrismaticBraidWord { tokens, ..vb.clone() })
}

/// Attaches a handle at every virtual crossing: the k-th `χ_i` (in token
/// order) becomes `λ_{i,x_k}^-1 χ_i λ_{i,y_k}`. Returns the genus and word.
pub fn homotopy_zh_from_braid(vb: &PrismaticBraidWord) -> Result<(usize, PrismaticBraidWord), DiagramError> {
    require_virtual(vb)?;
    let g = vb.virtual_count();
    let mut tokens = Vec::with_capacity(vb.tokens.len() + 2 * g);
    let mut k = 0;
    for t in &vb.tokens {
        match *t {
            Token::Chi { i } => {
                k += 1;
                tokens.extend([
                    Token::Lambda { j: i, color: Color::X(k), positive: false },
                    *t,
                    Token::Lambda { j: i, color: Color::Y(k), positive: true },
                ]);
            }
            _ => tokens.push(*t),
        }
    }
    let w = PrismaticBraidWord { n: vb.n, palette: SymplecticPalette::new(g), tokens, left_closed: vb.left_closed };
    Ok((g, w))
}

/// Recolors every x_k, y_k decoration to ω and drops the palette.
pub fn identify_colors(w: &PrismaticBraidWord) -> PrismaticBraidWord {
    let tokens = w
        .tokens
        .iter()
        .map(|t| match *t {
            Token::Lambda { j, positive, .. } => Token::Lambda { j, color: Color::Omega, positive },
            other => other,
        })
        .collect();
    PrismaticBraidWord { n: w.n, palette: SymplecticPalette::new(0), tokens, left_closed: w.left_closed }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn homology_zh_patterns() {
        let plain = PrismaticBraidWord::parse("N=2 g=0 ; S(1) S(1)").unwrap();
        assert_eq!(homology_zh(&plain).unwrap(), plain);
        let two = PrismaticBraidWord::parse("N=3 g=0 ; V(1) S(2) V(2)").unwrap();
        let z = homology_zh(&two).unwrap();
        let arcs = z.tokens.iter().filter(|t| matches!(t, Token::Lambda { .. })).count();
        assert_eq!(arcs, 4);
        assert_eq!(z.to_string(), "N=3 g=0 ; O'(1,om) V(1) O(1,om) S(2) O'(2,om) V(2) O(2,om)");
    }

    #[test]
    fn identification_recovers_homology_zh() {
        let vb = PrismaticBraidWord::parse("N=3 g=0 ; V(1) S'(2) V(2) S(1) V(1)").unwrap();
        let (g, w) = homotopy_zh_from_braid(&vb).unwrap();
        assert_eq!(g, 3);
        w.validate().unwrap();
        assert_eq!(identify_colors(&w), homology_zh(&vb).unwrap());
        let (g0, same) = homotopy_zh_from_braid(&PrismaticBraidWord::parse("N=2 g=0 ; S(1)").unwrap()).unwrap();
        assert_eq!(g0, 0);
        assert_eq!(same.tokens.len(), 1);
    }
}
