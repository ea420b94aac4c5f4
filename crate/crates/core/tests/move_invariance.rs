use prism::diagram::{apply_move, random_move, PrismaticBraidWord};
use prism::verify::{verify_moves, InvariantSet, VerifyOptions};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn random_words_keep_invariants() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut moves = 0;
    for seq in 0..200 {
        let n = rng.gen_range(1..=4);
        let g = rng.gen_range(0..=2);
        let len = rng.gen_range(0..=8);
        let mut w = PrismaticBraidWord::random(&mut rng, n, g, len);
        let mut inv = InvariantSet::of(&w, 10);
        for _ in 0..4 {
            let Some(m) = random_move(&mut rng, &w, false, 12) else { break };
            let next = apply_move(&w, &m).unwrap();
            let next_inv = InvariantSet::of(&next, 10);
            let diff = inv.differences(&next_inv);
            assert!(diff.is_empty(), "sequence {seq}: {w} --{m:?}--> {next} changes {diff:?}");
            w = next;
            inv = next_inv;
            moves += 1;
        }
    }
    assert!(moves > 400);
}

#[test]
fn report_is_thread_independent() {
    let w = PrismaticBraidWord::parse("N=3 g=1 ; S(1) O(2,x1) V(2) S'(1) O'(3,y1)").unwrap();
    let opts = VerifyOptions { iterations: 16, steps: 4, seed: 9, ..Default::default() };
    let a = verify_moves(&w, &opts);
    let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
    let b = pool.install(|| verify_moves(&w, &opts));
    assert_eq!(a.moves_applied, b.moves_applied);
    assert!(a.first.is_none() && b.first.is_none());
}
