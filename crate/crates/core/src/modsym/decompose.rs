//! Manin's continued-fraction trick: writing `{alpha, beta}` as a sum of
//! unimodular symbols `{g 0, g oo}`.

use super::cusps::Cusp;

/// Matrices `g` in `SL_2(Z)` and coefficients with
/// `{alpha, beta} = sum coeff * {g 0, g oo}`. Reducing the bottom rows modulo
/// the level gives Manin cosets.
pub fn decompose_usual(alpha: Cusp, beta: Cusp) -> Vec<([i128; 4], i64)> {
    if alpha == beta {
        return Vec::new();
    }
    let mut out = from_zero(beta);
    for (g, k) in from_zero(alpha) {
        out.push((g, -k));
    }
    out
}

/// Terms for `{0, beta}`.
fn from_zero(beta: Cusp) -> Vec<([i128; 4], i64)> {
    let mut out = Vec::new();
    if beta == Cusp::zero() {
        return out;
    }
    // Convergents with the leading pair 0/1, 1/0.
    let mut chain: Vec<(i128, i128)> = vec![(0, 1), (1, 0)];
    if !beta.is_infinity() {
        let (mut p, mut q) = (beta.p, beta.q);
        let (mut p1, mut q1) = (1i128, 0i128);
        let (mut p2, mut q2) = (0i128, 1i128);
        while q != 0 {
            let a = p.div_euclid(q);
            (p, q) = (q, p - a * q);
            let (pn, qn) = (a * p1 + p2, a * q1 + q2);
            (p2, q2, p1, q1) = (p1, q1, pn, qn);
            chain.push((pn, qn));
        }
    }
    for w in chain.windows(2) {
        let ((pp, qp), (pk, qk)) = (w[0], w[1]);
        let s = pk * qp - pp * qk;
        debug_assert!(s == 1 || s == -1);
        // g = (pk, s pp; qk, s qp): g 0 = pp/qp, g oo = pk/qk
        out.push(([pk, s * pp, qk, s * qp], 1));
    }
    out
}

/// Cusps `(g 0, g oo)` for the symbol with the given `SL_2(Z)` matrix.
pub fn symbol_endpoints(m: [i128; 4]) -> (Cusp, Cusp) {
    let [a, b, c, d] = m;
    (Cusp::new(b, d), Cusp::new(a, c))
}
