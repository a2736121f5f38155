//! Experiment orchestration: k-sweeps, log-log decay fits, and
//! fixed-subspace reports.
//!
//! A sweep produces one [`DecayRecord`] per level; the log-log fit
//! estimates the decay exponent of an `O(1/k)`-type bound. Because the
//! constants in such bounds are non-constructive, acceptance is a slope
//! band plus the separately reported empirical constant
//! `sup_k k·value`. Sweeps fan out per-`k` to parallel workers and are
//! deterministic: identical configuration yields byte-identical CSV.

use crate::error::{Error, Result};
use crate::su2::commutant::{fixed_and_commutant, CommutantReport};
use crate::su2::genus1::genus1_rep;
use crate::su2::genus2::genus2_rep;
use crate::theta::coherent::{bergman_overlap, invariance_defect, transport_defect};
use crate::theta::quadrature::{operator_norm, toeplitz_matrix_with, TrigPoly, QUAD_TOL};
use crate::theta::weil::{metaplectic_safe, weil_matrices};
use crate::theta::{torsion_set, GeneratorWord, ModularParameter, TorusPoint};
use rayon::prelude::*;
use serde::Serialize;

/// One point of a decay series.
#[derive(Debug, Clone)]
pub struct DecayRecord {
    pub k: u32,
    pub value: f64,
    pub experiment: String,
    /// Deterministic fingerprint of the sweep parameters.
    pub fingerprint: String,
}

/// Ordinary-least-squares fit of `log value` against `log k`.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct FitResult {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
    pub n: usize,
}

/// Machine-readable fit bundle for one experiment series.
#[derive(Debug, Clone, Serialize)]
pub struct FitBundle {
    pub experiment: String,
    pub slope: f64,
    pub intercept: f64,
    pub r2: f64,
    pub n: usize,
    pub k_min: u32,
    pub k_max: u32,
    pub sup_k_times_value: f64,
}

/// The four sweepable experiments.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Experiment {
    InvarianceDefect,
    TransportDefect,
    ToeplitzProduct,
    CoherentOverlap,
}

impl Experiment {
    pub fn tag(self) -> &'static str {
        match self {
            Experiment::InvarianceDefect => "invariance_defect",
            Experiment::TransportDefect => "transport_defect",
            Experiment::ToeplitzProduct => "toeplitz_product",
            Experiment::CoherentOverlap => "coherent_overlap",
        }
    }
}

/// Sweep parameters; each experiment reads the fields it needs.
#[derive(Debug, Clone)]
pub struct SweepParams {
    /// Generator word for the invariance defect.
    pub word: GeneratorWord,
    /// Torsion order of the set `X`.
    pub m: u32,
    pub tau0: ModularParameter,
    /// Second modular parameter (transport defect).
    pub tau1: ModularParameter,
    /// Points for the coherent overlap.
    pub x: TorusPoint,
    pub y: TorusPoint,
    /// Symbols for the Toeplitz product law.
    pub f1: TrigPoly,
    pub f2: TrigPoly,
    /// Quadrature convergence tolerance for the Toeplitz experiments.
    pub quad_tol: f64,
}

impl Default for SweepParams {
    fn default() -> Self {
        Self {
            word: GeneratorWord::parse("S").expect("static word"),
            m: 2,
            tau0: ModularParameter { re: 0.0, im: 1.0 },
            tau1: ModularParameter { re: 1.0, im: 1.0 },
            x: TorusPoint::new(0.0, 0.0),
            y: TorusPoint::new(0.5, 0.5),
            f1: TrigPoly::cosine(1, 0),
            f2: TrigPoly::sine(0, 1),
            quad_tol: QUAD_TOL,
        }
    }
}

fn fnv1a(bytes: &[u8]) -> u64 {
    let mut h = 0xcbf29ce484222325u64;
    for &b in bytes {
        h ^= b as u64;
        h = h.wrapping_mul(0x100000001b3);
    }
    h
}

impl SweepParams {
    /// Canonical fingerprint string (hex FNV-1a of the parameter dump).
    pub fn fingerprint(&self, experiment: Experiment) -> String {
        let canon = format!(
            "{}|word={}|m={}|tau0={},{}|tau1={},{}|x={},{}|y={},{}|f1={:?}|f2={:?}|qtol={:e}",
            experiment.tag(),
            self.word,
            self.m,
            self.tau0.re,
            self.tau0.im,
            self.tau1.re,
            self.tau1.im,
            self.x.a,
            self.x.b,
            self.y.a,
            self.y.b,
            self.f1,
            self.f2,
            self.quad_tol,
        );
        format!("{:016x}", fnv1a(canon.as_bytes()))
    }
}

fn eval_one(experiment: Experiment, k: u32, p: &SweepParams) -> Result<f64> {
    match experiment {
        Experiment::InvarianceDefect => {
            let xs = torsion_set(p.m)?;
            invariance_defect(&p.word, &xs, k, p.tau0)
        }
        Experiment::TransportDefect => transport_defect(p.x, k, p.tau0, p.tau1),
        Experiment::ToeplitzProduct => {
            let t1 = toeplitz_matrix_with(&p.f1, k, p.tau0, p.quad_tol)?;
            let t2 = toeplitz_matrix_with(&p.f2, k, p.tau0, p.quad_tol)?;
            let t12 = toeplitz_matrix_with(&p.f1.product(&p.f2), k, p.tau0, p.quad_tol)?;
            Ok(operator_norm(&(t1.matrix * t2.matrix - t12.matrix)))
        }
        Experiment::CoherentOverlap => Ok(bergman_overlap(p.x, p.y, k, p.tau0)?.norm()),
    }
}

/// Run one experiment over a k-grid; parallel per `k`, deterministic
/// record order.
pub fn sweep(
    experiment: Experiment,
    k_values: &[u32],
    params: &SweepParams,
) -> Result<Vec<DecayRecord>> {
    if k_values.is_empty() {
        return Err(Error::Domain("empty k grid".into()));
    }
    if let Some(&bad) = k_values.iter().find(|&&k| k < 2) {
        return Err(Error::Domain(format!("sweep levels must be >= 2, got k={bad}")));
    }
    if !k_values.windows(2).all(|w| w[0] < w[1]) {
        return Err(Error::Domain("k grid must be strictly increasing".into()));
    }
    let fp = params.fingerprint(experiment);
    k_values
        .par_iter()
        .map(|&k| {
            let value = eval_one(experiment, k, params).map_err(|e| match e {
                Error::Domain(m) => Error::Domain(format!("k={k}: {m}")),
                Error::Precision(m) => Error::Precision(format!("k={k}: {m}")),
                Error::Construction(m) => Error::Construction(format!("k={k}: {m}")),
                Error::Degenerate(m) => Error::Degenerate(format!("k={k}: {m}")),
            })?;
            Ok(DecayRecord {
                k,
                value,
                experiment: experiment.tag().to_string(),
                fingerprint: fp.clone(),
            })
        })
        .collect()
}

/// Default k grid: powers of two from 8 to 128 (even, metaplectically
/// clean).
pub fn default_grid() -> Vec<u32> {
    let grid = vec![8, 16, 32, 64, 128];
    debug_assert!(grid.iter().all(|&k| metaplectic_safe(k)));
    grid
}

/// OLS on `(log k, log value)`; exact on synthetic power laws.
pub fn loglog_fit(records: &[DecayRecord]) -> Result<FitResult> {
    if records.len() < 4 {
        return Err(Error::Domain(format!(
            "log-log fit needs >= 4 records, got {}",
            records.len()
        )));
    }
    if let Some(r) = records.iter().find(|r| r.value <= 0.0) {
        return Err(Error::Domain(format!(
            "log-log fit undefined: value {} at k={} is not positive",
            r.value, r.k
        )));
    }
    let n = records.len() as f64;
    let xs: Vec<f64> = records.iter().map(|r| (r.k as f64).ln()).collect();
    let ys: Vec<f64> = records.iter().map(|r| r.value.ln()).collect();
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    if sxx == 0.0 {
        return Err(Error::Domain("log-log fit needs at least two distinct k".into()));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss_tot: f64 = ys.iter().map(|y| (y - my) * (y - my)).sum();
    let ss_res: f64 = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| {
            let e = y - (intercept + slope * x);
            e * e
        })
        .sum();
    let r_squared = if ss_tot == 0.0 { 1.0 } else { (1.0 - ss_res / ss_tot).clamp(0.0, 1.0) };
    Ok(FitResult { slope, intercept, r_squared, n: records.len() })
}

/// Fit bundle with the empirical constant `sup_k k·value`.
pub fn fit_bundle(records: &[DecayRecord]) -> Result<FitBundle> {
    let fit = loglog_fit(records)?;
    Ok(FitBundle {
        experiment: records[0].experiment.clone(),
        slope: fit.slope,
        intercept: fit.intercept,
        r2: fit.r_squared,
        n: fit.n,
        k_min: records.iter().map(|r| r.k).min().unwrap(),
        k_max: records.iter().map(|r| r.k).max().unwrap(),
        sup_k_times_value: records
            .iter()
            .map(|r| r.k as f64 * r.value)
            .fold(f64::NEG_INFINITY, f64::max),
    })
}

/// Diagnostic: is the series decreasing over its final half? Raised as
/// a flag (not a failure) when violated.
pub fn eventually_decreasing(records: &[DecayRecord]) -> bool {
    if records.len() < 2 {
        return true;
    }
    let tail = records.len() / 2;
    records[tail..].windows(2).all(|w| w[1].value < w[0].value + 1e-15)
}

/// Sources for fixed-subspace reports.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FixedSource {
    AbelianWeil,
    TqftGenus1,
    TqftGenus2,
}

impl FixedSource {
    pub fn tag(self) -> &'static str {
        match self {
            FixedSource::AbelianWeil => "abelian_weil",
            FixedSource::TqftGenus1 => "tqft_genus1",
            FixedSource::TqftGenus2 => "tqft_genus2",
        }
    }
}

/// Commutant/fixed-subspace report with an orthonormal witness basis.
pub fn fixed_subspace_report(source: FixedSource, k: u32) -> Result<CommutantReport> {
    let gens = match source {
        FixedSource::AbelianWeil => {
            let (s, t) = weil_matrices(k)?;
            vec![s, t]
        }
        FixedSource::TqftGenus1 => {
            let (s, t) = genus1_rep(k)?;
            vec![s.matrix, t.matrix]
        }
        FixedSource::TqftGenus2 => genus2_rep(k)?.into_iter().map(|g| g.matrix).collect(),
    };
    fixed_and_commutant(&gens)
}

/// Deterministic CSV for a record list: `# key = value` header lines
/// followed by `experiment,k,value,params_hash` rows.
pub fn records_to_csv(records: &[DecayRecord], config_lines: &[(String, String)]) -> String {
    let mut out = String::new();
    for (key, value) in config_lines {
        out.push_str(&format!("# {key} = {value}\n"));
    }
    out.push_str("experiment,k,value,params_hash\n");
    for r in records {
        out.push_str(&format!("{},{},{:.17e},{}\n", r.experiment, r.k, r.value, r.fingerprint));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn synth(values: &[(u32, f64)]) -> Vec<DecayRecord> {
        values
            .iter()
            .map(|&(k, value)| DecayRecord {
                k,
                value,
                experiment: "synthetic".into(),
                fingerprint: "0".into(),
            })
            .collect()
    }

    #[test]
    fn fit_inverts_power_laws() {
        let recs = synth(&[(8, 1.0 / 8.0), (16, 1.0 / 16.0), (32, 1.0 / 32.0), (64, 1.0 / 64.0)]);
        let fit = loglog_fit(&recs).unwrap();
        assert!((fit.slope + 1.0).abs() < 1e-10);
        assert!(fit.intercept.abs() < 1e-10);
        assert!((fit.r_squared - 1.0).abs() < 1e-10);

        let recs2: Vec<_> = synth(
            &[8u32, 16, 32, 64, 128]
                .iter()
                .map(|&k| (k, 7.0 / (k as f64 * k as f64)))
                .collect::<Vec<_>>(),
        );
        let fit2 = loglog_fit(&recs2).unwrap();
        assert!((fit2.slope + 2.0).abs() < 1e-10);
        assert!((fit2.intercept - 7.0f64.ln()).abs() < 1e-10);
    }

    #[test]
    fn fit_rejects_nonpositive_and_short_series() {
        let recs = synth(&[(8, 0.1), (16, 0.0), (32, 0.1), (64, 0.1)]);
        match loglog_fit(&recs) {
            Err(Error::Domain(msg)) => assert!(msg.contains("k=16"), "{msg}"),
            other => panic!("expected domain error, got {other:?}"),
        }
        assert!(loglog_fit(&synth(&[(8, 1.0), (16, 0.5), (32, 0.25)])).is_err());
    }

    #[test]
    fn sweep_validates_grid() {
        let p = SweepParams::default();
        assert!(sweep(Experiment::TransportDefect, &[], &p).is_err());
        assert!(sweep(Experiment::TransportDefect, &[1, 2], &p).is_err());
        assert!(sweep(Experiment::TransportDefect, &[4, 4], &p).is_err());
    }

    #[test]
    fn identity_word_sweep_vanishes() {
        let params = SweepParams {
            word: GeneratorWord::parse("I").unwrap(),
            ..SweepParams::default()
        };
        let recs = sweep(Experiment::InvarianceDefect, &[4, 8], &params).unwrap();
        assert!(recs.iter().all(|r| r.value < 1e-12), "{recs:?}");
    }

    #[test]
    fn transport_sweep_with_equal_taus_vanishes() {
        let params = SweepParams {
            tau1: SweepParams::default().tau0,
            ..SweepParams::default()
        };
        let recs = sweep(Experiment::TransportDefect, &[4, 8, 16], &params).unwrap();
        assert!(recs.iter().all(|r| r.value < 1e-12));
    }

    #[test]
    fn csv_deterministic_and_ordered() {
        let params = SweepParams::default();
        let a = sweep(Experiment::CoherentOverlap, &[4, 8, 16], &params).unwrap();
        let b = sweep(Experiment::CoherentOverlap, &[4, 8, 16], &params).unwrap();
        let cfg = vec![("m".to_string(), "2".to_string())];
        assert_eq!(records_to_csv(&a, &cfg), records_to_csv(&b, &cfg));
        assert!(records_to_csv(&a, &cfg).starts_with("# m = 2\nexperiment,k,value,params_hash\n"));
        assert_eq!(a[0].k, 4);
        assert_eq!(a[2].k, 16);
    }

    #[test]
    fn abelian_weil_fixed_space_contains_charge_conjugation() {
        let rep = fixed_subspace_report(FixedSource::AbelianWeil, 4).unwrap();
        assert!(rep.fixed_dim >= 1, "fixed_dim = {}", rep.fixed_dim);
        // explicit witness: the permutation j -> -j mod k commutes with
        // both Weil generators
        let (s, t) = weil_matrices(4).unwrap();
        let c = crate::CMatrix::from_fn(4, 4, |j, l| {
            if (j + l) % 4 == 0 { crate::C64::new(1.0, 0.0) } else { crate::C64::new(0.0, 0.0) }
        });
        assert!((&s * &c - &c * &s).norm() < 1e-12);
        assert!((&t * &c - &c * &t).norm() < 1e-12);
    }

    #[test]
    fn genus2_report_trivial_at_prime_levels() {
        let rep = fixed_subspace_report(FixedSource::TqftGenus2, 1).unwrap();
        assert_eq!(rep.commutant_dim, 1);
        assert_eq!(rep.fixed_dim, 0);
    }
}
