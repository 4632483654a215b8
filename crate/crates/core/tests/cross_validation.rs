//! Fast paths against the brute-force oracles.

use chibound::cograph::colour_cograph;
use chibound::engine::{bound, colour};
use chibound::generators::{random_cograph, random_gnp, random_in_class};
use chibound::oracle::{
    chromatic_number_exact, find_forbidden_by_enumeration, in_class_by_enumeration, max_clique_bruteforce,
    verify_colouring,
};
use chibound::recognition::{class_membership, find_induced_diamond, find_induced_p2p4, max_clique};
use chibound::rng::Rng;
use chibound::WitnessKind;

#[test]
fn detectors_agree_with_enumeration() {
    for i in 0..600 {
        let mut rng = Rng::new(Rng::derive(1, i));
        let n = rng.range(6, 10);
        let p = rng.next_f64();
        let g = random_gnp(n, p, rng.next_u64());
        let d = find_induced_diamond(&g);
        let q = find_induced_p2p4(&g);
        let d_oracle = find_forbidden_by_enumeration(&g, WitnessKind::Diamond).unwrap();
        let q_oracle = find_forbidden_by_enumeration(&g, WitnessKind::P2UnionP4).unwrap();
        assert_eq!(d.is_some(), d_oracle.is_some(), "diamond, instance {i}");
        assert_eq!(q.is_some(), q_oracle.is_some(), "P2+P4, instance {i}");
        for w in d.iter().chain(&q).chain(&d_oracle).chain(&q_oracle) {
            assert!(w.is_valid_in(&g), "invalid witness {w:?}");
        }
    }
}

#[test]
fn clique_number_agrees_with_bruteforce() {
    for i in 0..300 {
        let mut rng = Rng::new(Rng::derive(2, i));
        let n = rng.range(1, 16);
        let g = random_gnp(n, rng.next_f64(), rng.next_u64());
        assert_eq!(max_clique(&g).len(), max_clique_bruteforce(&g).unwrap(), "instance {i}");
    }
}

#[test]
fn generator_output_is_in_class() {
    for i in 0..400 {
        let mut rng = Rng::new(Rng::derive(3, i));
        let n = rng.range(2, 14);
        let g = random_in_class(n, rng.next_f64(), rng.next_u64());
        assert!(g.validate().is_ok());
        assert!(class_membership(&g).in_class, "instance {i}");
        if n <= 12 {
            assert!(in_class_by_enumeration(&g).unwrap(), "instance {i}");
        }
    }
}

#[test]
fn cographs_are_coloured_optimally() {
    for i in 0..300 {
        let mut rng = Rng::new(Rng::derive(4, i));
        let n = rng.range(1, 14);
        let g = random_cograph(n, rng.next_u64());
        let c = colour_cograph(&g).unwrap();
        c.check(&g).unwrap();
        let chi = chromatic_number_exact(&g, 32, None).unwrap();
        assert_eq!(c.colours_used, chi, "instance {i}");
        assert_eq!(chi, max_clique_bruteforce(&g).unwrap());
    }
}

#[test]
fn engine_between_chi_and_bound() {
    for i in 0..400 {
        let mut rng = Rng::new(Rng::derive(5, i));
        let n = rng.range(1, 16);
        let g = random_in_class(n, rng.next_f64(), rng.next_u64());
        let o = colour(&g).unwrap_or_else(|e| panic!("instance {i}: {e}"));
        assert_eq!(verify_colouring(&g, &o.colouring.assignment), Ok(None));
        let chi = chromatic_number_exact(&g, 32, None).unwrap();
        assert!(chi <= o.colouring.colours_used, "instance {i}");
        assert!(o.colouring.colours_used <= bound(o.omega), "instance {i}");
        if o.omega >= 4 {
            assert_eq!(o.colouring.colours_used, chi, "instance {i}");
        }
    }
}

#[test]
fn engine_is_deterministic() {
    for i in 0..50 {
        let g = random_in_class(16, 0.4, i);
        assert_eq!(colour(&g).unwrap(), colour(&g).unwrap());
    }
}
