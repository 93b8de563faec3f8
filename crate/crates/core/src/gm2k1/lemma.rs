//! `del Theta`, its behaviour under `(z1, z2) -> (z1, z2^p)`, and the
//! cocycle identity.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::k1::{bracket_symbol, mat_inv, mat_mul, K1Elem, Mat2};
use crate::arith;
use crate::error::{Error, Result};
use crate::par;

/// `del Theta(gamma) = <b, d> - <0, 1>` for `gamma = (a b; c d)`.
pub fn del_theta(g: Mat2) -> Result<K1Elem> {
    check_sl2(g)?;
    Ok(bracket_symbol(g[1], g[3])?.div(&bracket_symbol(0, 1)?))
}

/// `(a b; c d) -> (a, pb; c/p, d)`.
pub fn phi_p(g: Mat2, p: i64) -> Result<Mat2> {
    if g[2] % p != 0 {
        return Err(Error::NotDivisible(p as u64));
    }
    Ok([g[0], p * g[1], g[2] / p, g[3]])
}

fn check_sl2(g: Mat2) -> Result<()> {
    if g[0] * g[3] - g[1] * g[2] != 1 {
        return Err(Error::InvalidParameters(format!("{g:?} is not in SL_2(Z)")));
    }
    Ok(())
}

/// Whether `alpha_* del Theta(gamma) = del Theta(phi_p(gamma))` for
/// `gamma` in `Gamma_0(Mp)`.
pub fn lemma41_check(level: u64, p: u64, g: Mat2) -> Result<bool> {
    check_sl2(g)?;
    let n = (level * p) as i64;
    if g[2] % n != 0 {
        return Err(Error::NotInGamma0 { level: level * p, detail: format!("{g:?}") });
    }
    let p = p as i64;
    let lhs = del_theta(g)?.pushforward_alpha(p);
    let rhs = del_theta(phi_p(g, p)?)?;
    Ok(lhs == rhs)
}

/// A random element of `Gamma_0(n)` with entries of moderate size.
pub fn random_gamma0<R: Rng>(n: u64, rng: &mut R) -> Mat2 {
    let n = n as i64;
    loop {
        let c = n * rng.gen_range(-6i64..=6);
        let d = if c == 0 {
            if rng.gen_bool(0.5) {
                1
            } else {
                -1
            }
        } else {
            rng.gen_range(-60i64..=60)
        };
        if d == 0 || arith::gcd(c, d) != 1 {
            continue;
        }
        // d x + c y = 1 gives a = x, b = -y.
        let (_, x, y) = arith::egcd(d, c);
        let t = rng.gen_range(-3i64..=3);
        let g = [x + t * c, -y + t * d, c, d];
        debug_assert_eq!(g[0] * g[3] - g[1] * g[2], 1);
        return g;
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct LemmaReport {
    pub level: u64,
    pub p: u64,
    pub trials: usize,
    pub seed: u64,
    pub failures: usize,
    pub first_failure: Option<Mat2>,
    pub pass: bool,
}

/// Runs [`lemma41_check`] on `trials` seeded random elements of `Gamma_0(Mp)`.
pub fn lemma41_trials(level: u64, p: u64, trials: usize, seed: u64) -> Result<LemmaReport> {
    if !arith::is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let samples: Vec<Mat2> = (0..trials).map(|_| random_gamma0(level * p, &mut rng)).collect();
    let results = par::map_slice(&samples, |g| lemma41_check(level, p, *g));
    let mut failures = Vec::new();
    for (g, r) in samples.iter().zip(results) {
        if !r? {
            failures.push(*g);
        }
    }
    Ok(LemmaReport {
        level,
        p,
        trials,
        seed,
        failures: failures.len(),
        first_failure: failures.first().copied(),
        pass: failures.is_empty(),
    })
}

/// How `SL_2(Z)` acts on `K_1` in the cocycle identity.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub enum ActionConvention {
    Pullback,
    PullbackInverse,
    Pushforward,
    PushforwardInverse,
}

impl ActionConvention {
    pub const ALL: [ActionConvention; 4] = [
        ActionConvention::Pullback,
        ActionConvention::PullbackInverse,
        ActionConvention::Pushforward,
        ActionConvention::PushforwardInverse,
    ];

    /// For automorphisms `gamma_* = (gamma^{-1})^*`.
    pub fn act(self, g: Mat2, x: &K1Elem) -> K1Elem {
        match self {
            ActionConvention::Pullback | ActionConvention::PushforwardInverse => x.pullback(g),
            ActionConvention::PullbackInverse | ActionConvention::Pushforward => x.pullback(mat_inv(g)),
        }
    }
}

fn cocycle_holds(conv: ActionConvention, g1: Mat2, g2: Mat2) -> Result<bool> {
    let lhs = del_theta(mat_mul(g1, g2))?;
    let rhs = del_theta(g1)?.mul(&conv.act(g1, &del_theta(g2)?));
    Ok(lhs == rhs)
}

const S: Mat2 = [0, -1, 1, 0];
const T: Mat2 = [1, 1, 0, 1];

/// The first convention satisfying the cocycle identity on the products of
/// `S`, `T` and their inverses.
pub fn calibrate_action() -> Result<ActionConvention> {
    let gens = [S, T, mat_inv(S), mat_inv(T), mat_mul(S, T), mat_mul(T, S)];
    for conv in ActionConvention::ALL {
        let mut ok = true;
        for g1 in gens {
            for g2 in gens {
                ok &= cocycle_holds(conv, g1, g2)?;
            }
        }
        if ok {
            return Ok(conv);
        }
    }
    Err(Error::FalseRelation("no action convention satisfies the cocycle identity".into()))
}

#[derive(Clone, Debug, Serialize)]
pub struct CocycleReport {
    pub convention: ActionConvention,
    pub pairs: usize,
    pub seed: u64,
    pub failures: usize,
    pub pass: bool,
}

/// Checks `del(g1 g2) = del(g1) + g1 . del(g2)` on seeded random pairs.
pub fn cocycle_check(conv: ActionConvention, pairs: usize, seed: u64) -> Result<CocycleReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let samples: Vec<(Mat2, Mat2)> =
        (0..pairs).map(|_| (random_gamma0(1, &mut rng), random_gamma0(1, &mut rng))).collect();
    let results = par::map_slice(&samples, |(a, b)| cocycle_holds(conv, *a, *b));
    let mut failures = 0;
    for r in results {
        if !r? {
            failures += 1;
        }
    }
    Ok(CocycleReport { convention: conv, pairs, seed, failures, pass: failures == 0 })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sampler_lands_in_gamma0() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..500 {
            let g = random_gamma0(12, &mut rng);
            assert_eq!(g[0] * g[3] - g[1] * g[2], 1);
            assert_eq!(g[2] % 12, 0);
        }
    }

    #[test]
    fn lemma_on_random_elements() {
        for (m, p) in [(4, 2), (4, 3), (6, 5)] {
            let r = lemma41_trials(m, p, 200, 1).unwrap();
            assert!(r.pass, "{r:?}");
        }
    }

    #[test]
    fn del_theta_examples() {
        for m in [1, 4, 12] {
            assert!(del_theta([1, 0, m, 1]).unwrap().is_one());
        }
        let s = del_theta([0, -1, 1, 0]).unwrap();
        assert_eq!(s, bracket_symbol(-1, 0).unwrap().div(&bracket_symbol(0, 1).unwrap()));
        assert_eq!(del_theta([1, 1, 0, 1]).unwrap().pushforward_alpha(3), del_theta([1, 3, 0, 1]).unwrap());
        assert!(lemma41_check(4, 3, [1, 1, 0, 1]).unwrap());
        assert!(lemma41_check(4, 2, [1, 0, 8, 1]).unwrap());
        assert!(del_theta([1, 0, 8, 1]).unwrap().pushforward_alpha(2).is_one());
    }

    #[test]
    fn lemma_rejects_wrong_level() {
        assert!(lemma41_check(4, 2, [1, 0, 4, 1]).is_err());
    }

    #[test]
    fn pullback_convention_is_selected() {
        let conv = calibrate_action().unwrap();
        assert_eq!(conv, ActionConvention::Pullback);
        assert!(cocycle_check(conv, 100, 3).unwrap().pass);
        assert!(!cocycle_check(ActionConvention::PullbackInverse, 100, 3).unwrap().pass);
    }
}
