//! Closed-network evaluators: theta nets, tetrahedra, joined Hopf
//! links, and unitarized 6j symbols.
//!
//! With `i = (b+c−a)/2`, `j = (a+c−b)/2`, `κ = (a+b−c)/2` the theta net
//! is
//!
//! ```text
//! θ(a,b,c) = (−1)^{i+j+κ} [i+j+κ+1]! [i]! [j]! [κ]! / ([i+j]! [j+κ]! [i+κ]!),
//! ```
//!
//! and the tetrahedron `Tet[A B E; C D F]` (vertices `(A,B,E)`,
//! `(C,D,E)`, `(A,D,F)`, `(B,C,F)`) is the usual single-sum
//! Kauffman–Lins evaluation. Under admissibility every factorial
//! argument in a denominator stays `≤ k`, where all quantum integers
//! are positive, so no division ever degenerates; vanishing numerator
//! factorials (`[n]! = 0` for `n ≥ k+2`) correctly kill out-of-range
//! terms.

use crate::C64;
use crate::error::{Error, Result};
use crate::su2::root::RootData;

fn check_adm(rd: &RootData, a: u32, b: u32, c: u32) -> Result<()> {
    if !rd.admissible(a, b, c) {
        return Err(Error::Domain(format!("inadmissible triple ({a},{b},{c}) at k={}", rd.k)));
    }
    Ok(())
}

/// Theta network `θ(a,b,c)`; real, sign `(−1)^{(a+b+c)/2}`.
pub fn theta_net(rd: &RootData, a: u32, b: u32, c: u32) -> Result<f64> {
    check_adm(rd, a, b, c)?;
    let i = (b + c - a) / 2;
    let j = (a + c - b) / 2;
    let kap = (a + b - c) / 2;
    let sign = if (i + j + kap) % 2 == 0 { 1.0 } else { -1.0 };
    Ok(sign * rd.qfact(i + j + kap + 1) * rd.qfact(i) * rd.qfact(j) * rd.qfact(kap)
        / (rd.qfact(i + j) * rd.qfact(j + kap) * rd.qfact(i + kap)))
}

/// Tetrahedron net `Tet[a b e; c d f]`.
pub fn tet_net(rd: &RootData, a: u32, b: u32, e: u32, c: u32, d: u32, f: u32) -> Result<f64> {
    for &(p, q, r) in &[(a, b, e), (c, d, e), (a, d, f), (b, c, f)] {
        check_adm(rd, p, q, r)?;
    }
    let verts = [(a + b + e) / 2, (c + d + e) / 2, (a + d + f) / 2, (b + c + f) / 2];
    let squares = [(b + d + e + f) / 2, (a + c + e + f) / 2, (a + b + c + d) / 2];
    let mut interior = 1.0;
    for &bb in &squares {
        for &aa in &verts {
            interior *= rd.qfact(bb - aa);
        }
    }
    let mut exterior = 1.0;
    for &edge in &[a, b, e, c, d, f] {
        exterior *= rd.qfact(edge);
    }
    let s_lo = *verts.iter().max().unwrap();
    let s_hi = *squares.iter().min().unwrap();
    let mut sum = 0.0;
    for s in s_lo..=s_hi {
        let mut den = 1.0;
        for &aa in &verts {
            den *= rd.qfact(s - aa);
        }
        for &bb in &squares {
            den *= rd.qfact(bb - s);
        }
        let sign = if s % 2 == 0 { 1.0 } else { -1.0 };
        sum += sign * rd.qfact(s + 1) / den;
    }
    Ok(interior / exterior * sum)
}

/// Joined Hopf pairing with a boundary color `m`:
/// `H(a,b;m) = μ_a^{−1} μ_b^{−1} Σ_c Δ_c μ_c Tet[a b c; b a m]/θ(a,b,c)`.
///
/// At `m = 0` this reduces to the Hopf-link evaluation
/// `(−1)^{a+b} [(a+1)(b+1)]`.
pub fn hopf_joined(rd: &RootData, a: u32, b: u32, m: u32) -> Result<C64> {
    let mut sum = C64::new(0.0, 0.0);
    for c in 0..=rd.k {
        if !rd.admissible(a, b, c) {
            continue;
        }
        let tet = tet_net(rd, a, b, c, b, a, m)?;
        let th = theta_net(rd, a, b, c)?;
        sum += rd.mu(c) * C64::new(rd.delta(c) * tet / th, 0.0);
    }
    Ok(sum / (rd.mu(a) * rd.mu(b)))
}

/// Unitarized 6j symbol for the recoupling move on four external legs
/// `(a, b, c, d)`: sends the tree pairing `(a b) — i — (c d)` to the
/// tree pairing `(a d) — j — (b c)`. Obtained from the raw Kauffman–Lins
/// coefficient `Tet[a b i; c d j]·Δ_j/(θ(a,d,j)θ(b,c,j))` by rescaling
/// with the tree norms `|θθ/Δ|` of source and target.
pub fn sixj_unitary(
    rd: &RootData,
    a: u32,
    b: u32,
    c: u32,
    d: u32,
    i: u32,
    j: u32,
) -> Result<f64> {
    let tet = tet_net(rd, a, b, i, c, d, j)?;
    let th_adj = theta_net(rd, a, d, j)?;
    let th_bcj = theta_net(rd, b, c, j)?;
    let th_abi = theta_net(rd, a, b, i)?;
    let th_cdi = theta_net(rd, c, d, i)?;
    let raw = tet * rd.delta(j) / (th_adj * th_bcj);
    let n_src = (th_abi * th_cdi / rd.delta(i)).abs();
    let n_dst = (th_adj * th_bcj / rd.delta(j)).abs();
    Ok(raw * (n_dst / n_src).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn theta_normalization_and_errors() {
        let rd = RootData::new(3).unwrap();
        assert!((theta_net(&rd, 0, 0, 0).unwrap() - 1.0).abs() < 1e-15);
        assert!(matches!(theta_net(&rd, 1, 0, 0), Err(Error::Domain(_))));
        // theta(a,a,0) equals the signed loop value Delta_a
        for a in 0..=3 {
            assert!((theta_net(&rd, a, a, 0).unwrap() - rd.delta(a)).abs() < 1e-12);
        }
    }

    #[test]
    fn tet_with_trivial_edge_reduces_to_theta() {
        for k in 1..=5 {
            let rd = RootData::new(k).unwrap();
            for a in 0..=k {
                for b in 0..=k {
                    for e in 0..=k {
                        if rd.admissible(a, b, e) {
                            let t = tet_net(&rd, a, b, e, b, a, 0).unwrap();
                            let th = theta_net(&rd, a, b, e).unwrap();
                            assert!((t - th).abs() < 1e-9 * th.abs().max(1.0), "k={k} ({a},{b},{e})");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn hopf_closed_form_at_trivial_boundary() {
        use std::f64::consts::PI;
        for k in 1..=5 {
            let rd = RootData::new(k).unwrap();
            let n = (k + 2) as f64;
            for a in 0..=k {
                for b in 0..=k {
                    let h = hopf_joined(&rd, a, b, 0).unwrap();
                    let sign = if (a + b) % 2 == 0 { 1.0 } else { -1.0 };
                    // [(a+1)(b+1)] straight from the sine definition (the
                    // argument can exceed the cached window)
                    let q = ((((a + 1) * (b + 1)) as f64) * PI / n).sin() / (PI / n).sin();
                    let expect = sign * q;
                    assert!(
                        (h - C64::new(expect, 0.0)).norm() < 1e-8 * expect.abs().max(1.0),
                        "k={k} a={a} b={b}: {h} vs {expect}"
                    );
                }
            }
        }
    }

    #[test]
    fn sixj_orthogonality() {
        // For every 4-tuple of external legs the unitarized 6j block is
        // an orthogonal matrix between the two admissible middle-label
        // sets.
        let k = 3;
        let rd = RootData::new(k).unwrap();
        for a in 0..=k {
            for b in 0..=k {
                for c in 0..=k {
                    for d in 0..=k {
                        let is_: Vec<u32> = (0..=k)
                            .filter(|&i| rd.admissible(a, b, i) && rd.admissible(c, d, i))
                            .collect();
                        let js: Vec<u32> = (0..=k)
                            .filter(|&j| rd.admissible(a, d, j) && rd.admissible(b, c, j))
                            .collect();
                        if is_.is_empty() {
                            assert!(js.is_empty());
                            continue;
                        }
                        assert_eq!(is_.len(), js.len(), "({a},{b},{c},{d})");
                        let n = is_.len();
                        let mut m = vec![vec![0.0f64; n]; n];
                        for (col, &i) in is_.iter().enumerate() {
                            for (row, &j) in js.iter().enumerate() {
                                m[row][col] = sixj_unitary(&rd, a, b, c, d, i, j).unwrap();
                            }
                        }
                        for r1 in 0..n {
                            for r2 in 0..n {
                                let dot: f64 = (0..n).map(|c_| m[r1][c_] * m[r2][c_]).sum();
                                let expect = if r1 == r2 { 1.0 } else { 0.0 };
                                assert!(
                                    (dot - expect).abs() < 1e-10,
                                    "({a},{b},{c},{d}) rows {r1},{r2}: {dot}"
                                );
                            }
                        }
                    }
                }
            }
        }
    }
}
