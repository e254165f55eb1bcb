use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use prymkit::cover::{GluedTower, MonodromyCover};
use prymkit::f2::isotropic::enumerate_isotropic;
use prymkit::f2::{all_forms, SymplecticF2};
use prymkit::instances::{random_bigonal_instance, random_etale_tower, random_perm, random_rational_cover};
use prymkit::perm::{compose, Perm};
use prymkit::polygonal::{bigonal, trigonal_forward};

fn cycles_of(images: &[usize]) -> usize {
    let mut seen = vec![false; images.len()];
    let mut count = 0;
    for start in 0..images.len() {
        if !seen[start] {
            count += 1;
            let mut i = start;
            while !seen[i] {
                seen[i] = true;
                i = images[i];
            }
        }
    }
    count
}

/// Riemann-Hurwitz for a connected cover of the line.
fn hurwitz_genus(c: &MonodromyCover) -> i64 {
    let n = c.degree() as i64;
    let ram: i64 = c.branches().iter().map(|g| n - cycles_of(g.images()) as i64).sum();
    (ram - 2 * n + 2) / 2
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn compose_applies_the_right_factor_first(seed in any::<u64>(), n in 1usize..8) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (a, b) = (random_perm(&mut rng, n), random_perm(&mut rng, n));
        let ab = compose(&a, &b);
        for i in 0..n {
            prop_assert_eq!(ab.apply(i), a.apply(b.apply(i)));
        }
    }

    #[test]
    fn cycle_display_round_trips(seed in any::<u64>(), n in 1usize..9) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = random_perm(&mut rng, n);
        prop_assert_eq!(Perm::parse(&p.to_string(), n).unwrap(), p);
    }

    #[test]
    fn genus_agrees_with_hurwitz(seed in any::<u64>(), n in 2usize..6, labels in 3usize..8) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let c = random_rational_cover(&mut rng, n, labels, true);
        prop_assert_eq!(c.genus().unwrap(), hurwitz_genus(&c));
    }

    #[test]
    fn etale_lift_has_genus_twice_minus_one(seed in any::<u64>(), n in 2usize..5, labels in 3usize..8) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let t = random_etale_tower(&mut rng, n, labels);
        let g = hurwitz_genus(&t.curve());
        let lift = t.lift();
        if lift.is_connected() {
            prop_assert_eq!(hurwitz_genus(&lift), 2 * g - 1);
        } else {
            prop_assert_eq!(lift.component_genera(), vec![g, g]);
        }
    }

    #[test]
    fn trigonal_partner_drops_genus_by_one(seed in any::<u64>(), labels in 3usize..9) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let t = random_etale_tower(&mut rng, 3, labels);
        let x = trigonal_forward(&GluedTower::smooth(t.clone())).unwrap();
        prop_assert_eq!(x.arithmetic_genus(), hurwitz_genus(&t.curve()) - 1);
    }

    #[test]
    fn bigonal_keeps_the_prym_dimension(seed in any::<u64>(), genus in 0usize..3, labels in 2usize..6) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let t = random_bigonal_instance(&mut rng, genus, labels);
        let out = bigonal(&t).unwrap();
        let dim = |t: &GluedTower| t.upstairs().arithmetic_genus() - t.downstairs().arithmetic_genus();
        prop_assert_eq!(dim(&t), dim(&out));
    }
}

#[test]
fn arf_is_the_majority_value() {
    for g in 1..=3 {
        let s = SymplecticF2::standard(g);
        for q in all_forms(&s) {
            let ones = (0..s.size()).filter(|&x| q.eval(x) == 1).count() as u64;
            assert_eq!(q.arf(), u8::from(2 * ones > s.size()), "g={g}");
        }
    }
}

#[test]
fn isotropic_subspaces_match_brute_force() {
    // count r-tuples of independent pairwise orthogonal vectors, divided by |GL_r(F2)|
    let s = SymplecticF2::standard(2);
    let vectors: Vec<u64> = (1..s.size()).collect();
    let mut frames = [0u64; 3];
    for &a in &vectors {
        frames[1] += 1;
        for &b in &vectors {
            if b != a && s.pair(a, b) == 0 {
                frames[2] += 1;
            }
        }
    }
    let gl = [1, 1, 6];
    for r in 1..=2 {
        assert_eq!(enumerate_isotropic(&s, r).unwrap().len() as u64, frames[r] / gl[r]);
    }
}
