use proptest::prelude::*;
use std::sync::Arc;

use k2modsym::arith;
use k2modsym::gm2k1::{
    bracket_symbol, bracket_with_completion, complete, del_theta, lemma41_check, mat_mul, phi_p, DivKey, DivisorFn,
    K1Elem, Root,
};
use k2modsym::k2model::{PresentedK2, SymbolicK2, TameContext};
use k2modsym::modsym::{diamond_matrix, hecke_t_matrix, HomologyPresentation};
use k2modsym::par;

fn primitive() -> impl Strategy<Value = (i64, i64)> {
    (-30i64..=30, -30i64..=30).prop_filter("primitive", |&(a, c)| arith::gcd(a, c) == 1)
}

fn sl2() -> impl Strategy<Value = [i64; 4]> {
    (primitive(), -4i64..=4).prop_map(|((a, c), t)| {
        let (b, d) = complete(a, c).unwrap();
        [a, b + t * a, c, d + t * c]
    })
}

fn k1_elem() -> impl Strategy<Value = K1Elem> {
    prop::collection::vec((primitive(), -2i64..=2, 0i64..6, 1i64..=6), 1..4).prop_map(|terms| {
        let mut x = K1Elem::one();
        for ((a, c), e, num, den) in terms {
            let key = DivKey::new(a, c, Root::from_frac(num, den)).unwrap();
            x = x.mul(&K1Elem::single(key, DivisorFn::one_minus_s().pow(e)));
        }
        x
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn bracket_ignores_completion((a, c) in primitive(), k in -5i64..=5) {
        let (b, d) = complete(a, c).unwrap();
        prop_assert_eq!(bracket_with_completion(a, c, b + k * a, d + k * c).unwrap(), bracket_symbol(a, c).unwrap());
    }

    #[test]
    fn pullback_is_functorial(x in k1_elem(), g in sl2(), h in sl2()) {
        prop_assert_eq!(x.pullback(mat_mul(g, h)), x.pullback(h).pullback(g));
    }

    #[test]
    fn pushforward_is_multiplicative(x in k1_elem(), y in k1_elem(), p in prop::sample::select(vec![2i64, 3, 5, 7])) {
        prop_assert_eq!(x.mul(&y).pushforward_alpha(p), x.pushforward_alpha(p).mul(&y.pushforward_alpha(p)));
    }

    #[test]
    fn projection_formula(x in k1_elem(), p in prop::sample::select(vec![2i64, 3, 5])) {
        prop_assert_eq!(x.pullback_alpha(p).pushforward_alpha(p), x.pow(p));
    }

    #[test]
    fn cocycle_identity(g in sl2(), h in sl2()) {
        let lhs = del_theta(mat_mul(g, h)).unwrap();
        let rhs = del_theta(g).unwrap().mul(&del_theta(h).unwrap().pullback(g));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn lemma_on_gamma0(
        (m, p) in prop::sample::select(vec![(1u64, 2u64), (3, 2), (4, 3), (5, 7), (6, 5)]),
        k in -5i64..=5,
        d in -40i64..=40,
        t in -3i64..=3,
    ) {
        let c = (m * p) as i64 * k;
        prop_assume!(d != 0 && arith::gcd(c, d) == 1);
        let (_, x, y) = arith::egcd(d, c);
        let g = [x + t * c, -y + t * d, c, d];
        prop_assert!(lemma41_check(m, p, g).unwrap());
        prop_assert_eq!(phi_p(g, p as i64).unwrap()[2] * p as i64, c);
    }

    #[test]
    fn map_indexed_is_mode_independent(n in 0usize..200) {
        par::set_parallel(false);
        let a = par::map_indexed(n, |i| i * i + 1);
        par::set_parallel(true);
        let b = par::map_indexed(n, |i| i * i + 1);
        prop_assert_eq!(a, b);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn symbols_are_bilinear_and_galois_stable(
        m in prop::sample::select(vec![7u64, 9, 11, 12]),
        x in prop::collection::vec(-3i128..=3, 14),
        y in prop::collection::vec(-3i128..=3, 14),
        t in 1i64..12,
    ) {
        prop_assume!(arith::gcd(t, m as i64) == 1);
        let n = m as usize + 1;
        let (x, y) = (&x[..n], &y[..n]);
        let s = SymbolicK2::wedge_vectors(m, x, y);
        let ctx = TameContext::new(m).unwrap();
        // {x, y} + {y, x} vanishes in both backends.
        let anti = s.add(&SymbolicK2::wedge_vectors(m, y, x));
        prop_assert!(PresentedK2::build(m).unwrap().is_zero(&anti).unwrap());
        prop_assert!(ctx.eval(&anti).unwrap().is_trivial());
        // The tame map is additive.
        let twice = ctx.eval(&s.scale(2)).unwrap();
        let e = ctx.eval(&s).unwrap();
        let sum: Vec<u64> = e.logs.iter().zip(&e.orders).map(|(&a, &q)| (2 * a) % q).collect();
        prop_assert_eq!(twice.logs, sum);
        prop_assert_eq!(s.galois(t).unwrap().galois(t).unwrap(), s.galois(t * t).unwrap());
    }
}

#[test]
fn hecke_operators_commute_with_diamonds() {
    for m in [11u64, 13, 15] {
        let pres = Arc::new(HomologyPresentation::new(m).unwrap());
        let t2 = hecke_t_matrix(&pres, 2).unwrap();
        let d = diamond_matrix(&pres, 2 % m).unwrap();
        assert_eq!(t2.mul(&d), d.mul(&t2), "level {m}");
        let t7 = hecke_t_matrix(&pres, 7).unwrap();
        assert_eq!(t2.mul(&t7), t7.mul(&t2), "level {m}");
    }
}
