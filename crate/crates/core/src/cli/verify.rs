//! The verification suite behind `qpad verify`.

use std::fmt::Write as _;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::pauli::smallest_odd_prime_at_least;
use crate::qcore::{fact_trace2_epsilon, purity, random_pure_vector, trace_distance, DensityMatrix};
use crate::schemes::{
    adversarial_suite, embed_qubits, scheme_a_channel, scheme_b_channel, scheme_b_channel_sampled, scheme_c_channel,
    scheme_c_core_channel, BoundMode, SchemeAConfig, SchemeBConfig, SchemeCConfig, SchemeKind,
};
use crate::smallbias::{aghp_set, SmallBiasSet};

/// Slack on distance comparisons.
pub const DISTANCE_TOL: f64 = 1e-8;
/// Slack on purity comparisons.
pub const PURITY_TOL: f64 = 1e-10;
/// Largest n for which `verify` evaluates exact channels.
pub const MAX_VERIFY_QUBITS: usize = 5;
/// Largest n for the full scheme B cq-channel.
pub const MAX_FULL_B_QUBITS: usize = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum OutputFormat {
    #[default]
    Table,
    Csv,
}

/// Everything that determines a `verify` run. Equal specs give byte-identical reports.
#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentSpec {
    pub schemes: Vec<SchemeKind>,
    pub n: usize,
    pub epsilon: f64,
    /// Random pure states added to the fixed suite.
    pub trials: usize,
    pub seed: u64,
    /// AGHP field degree for scheme A; chosen from ε when absent.
    pub a_field: Option<u32>,
    /// Key-space dimension for scheme B; `n + 2⌈log₂(1/ε)⌉` capped at 2n when absent.
    pub b_k: Option<usize>,
    /// Evaluate scheme B on this many sampled tags instead of all of them.
    pub b_tag_samples: Option<usize>,
    /// AGHP field degree for the scheme C phase set; chosen from ε when absent.
    pub c_field: Option<u32>,
    pub mode: BoundMode,
    pub format: OutputFormat,
}

impl Default for ExperimentSpec {
    fn default() -> Self {
        Self {
            schemes: vec![SchemeKind::A, SchemeKind::B, SchemeKind::C],
            n: 2,
            epsilon: 0.5,
            trials: 4,
            seed: 0,
            a_field: None,
            b_k: None,
            b_tag_samples: None,
            c_field: None,
            mode: BoundMode::Tight,
            format: OutputFormat::Table,
        }
    }
}

/// One checked inequality on one channel output.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerifyRow {
    pub scheme: String,
    pub state: String,
    /// Dimension of the output (tags × block for cq-states).
    pub dim: usize,
    pub purity: f64,
    /// `sqrt(max(0, dim·purity − 1))`.
    pub purity_eps: f64,
    /// Exact trace distance from the maximally mixed reference.
    pub distance: f64,
    /// `distance`, `purity` or `via_purity`.
    pub check: String,
    pub value: f64,
    pub bound: f64,
    pub margin: f64,
    pub pass: bool,
}

impl VerifyRow {
    #[allow(clippy::too_many_arguments)]
    fn new(
        scheme: &str,
        state: &str,
        dim: usize,
        purity: f64,
        distance: f64,
        check: &str,
        value: f64,
        bound: f64,
    ) -> Self {
        let purity_eps = fact_trace2_epsilon(purity, dim);
        let tol = if check == "purity" { PURITY_TOL } else { DISTANCE_TOL };
        let pass = value <= bound + tol && distance <= purity_eps + DISTANCE_TOL;
        Self {
            scheme: scheme.to_string(),
            state: state.to_string(),
            dim,
            purity,
            purity_eps,
            distance,
            check: check.to_string(),
            value,
            bound,
            margin: bound - value,
            pass,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct VerifyReport {
    pub header: Vec<String>,
    pub rows: Vec<VerifyRow>,
}

impl VerifyReport {
    pub fn all_pass(&self) -> bool {
        self.rows.iter().all(|r| r.pass)
    }

    pub fn render(&self, format: OutputFormat) -> Result<String> {
        let mut out = String::new();
        for h in &self.header {
            writeln!(out, "# {h}").expect("write to string");
        }
        match format {
            OutputFormat::Csv => {
                let mut w = csv::Writer::from_writer(Vec::new());
                for row in &self.rows {
                    w.serialize(row).map_err(csv_error)?;
                }
                let bytes = w.into_inner().map_err(|e| Error::InvalidState(e.to_string()))?;
                out.push_str(&String::from_utf8(bytes).expect("csv output is UTF-8"));
            }
            OutputFormat::Table => {
                writeln!(
                    out,
                    "{:<7} {:<10} {:>5} {:>12} {:>12} {:>12} {:<10} {:>12} {:>12} {:>12}  result",
                    "scheme", "state", "dim", "purity", "purity_eps", "distance", "check", "value", "bound", "margin"
                )
                .expect("write to string");
                for r in &self.rows {
                    writeln!(
                        out,
                        "{:<7} {:<10} {:>5} {:>12.6e} {:>12.6e} {:>12.6e} {:<10} {:>12.6e} {:>12.6e} {:>12.4e}  {}",
                        r.scheme,
                        r.state,
                        r.dim,
                        r.purity,
                        r.purity_eps,
                        r.distance,
                        r.check,
                        r.value,
                        r.bound,
                        r.margin,
                        if r.pass { "PASS" } else { "FAIL" }
                    )
                    .expect("write to string");
                }
                let failed = self.rows.iter().filter(|r| !r.pass).count();
                writeln!(out, "# {} rows, {failed} failed", self.rows.len()).expect("write to string");
            }
        }
        Ok(out)
    }
}

fn csv_error(e: csv::Error) -> Error {
    Error::Parse(format!("csv: {e}"))
}

/// Reads the rows back from CSV output; `#` lines are skipped.
pub fn parse_csv_rows(text: &str) -> Result<Vec<VerifyRow>> {
    let mut reader = csv::ReaderBuilder::new().comment(Some(b'#')).from_reader(text.as_bytes());
    reader.deserialize().map(|r| r.map_err(csv_error)).collect()
}

/// AGHP field degree whose claimed bias `(n_out − 1)/2^m` meets `target`, capped at 13.
fn field_for(n_out: usize, target: f64) -> u32 {
    let need = ((n_out.saturating_sub(1)).max(1) as f64 / target).log2();
    (need - 1e-9).ceil().clamp(1.0, 13.0) as u32
}

/// The suite states plus `trials` random pure states from one ChaCha8 stream.
fn test_states(n: usize, trials: usize, seed: u64) -> Result<Vec<(String, DensityMatrix)>> {
    let mut states = adversarial_suite(n)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for t in 0..trials {
        states.push((format!("random{t}"), DensityMatrix::from_pure(&random_pure_vector(1 << n, &mut rng))?));
    }
    Ok(states)
}

fn distance_row(scheme: &str, state: &str, out: &DensityMatrix, bound: f64) -> Result<VerifyRow> {
    let dim = out.dim();
    let dist = trace_distance(out, &DensityMatrix::maximally_mixed(dim))?;
    Ok(VerifyRow::new(scheme, state, dim, purity(out), dist, "distance", dist, bound))
}

fn verify_a(
    spec: &ExperimentSpec,
    states: &[(String, DensityMatrix)],
    header: &mut Vec<String>,
) -> Result<Vec<VerifyRow>> {
    let n = spec.n;
    let target = spec.mode.factor() * spec.epsilon * (2f64).powf(-(n as f64) / 2.0);
    let field = spec.a_field.unwrap_or_else(|| field_for(2 * n, target));
    let cfg = SchemeAConfig::new(n, aghp_set(2 * n, field)?, spec.epsilon, spec.mode)?;
    header.push(format!(
        "A: AGHP set over {} bits, field degree {field}, |B|={} certified_bias={:e} required_bias={:e} secure={}",
        2 * n,
        cfg.key_count(),
        cfg.certified_bias(),
        cfg.required_bias(),
        cfg.is_secure()
    ));
    let mut rows = Vec::new();
    for (label, rho) in states {
        rows.push(distance_row("A", label, &scheme_a_channel(&cfg, rho)?, cfg.distance_bound())?);
    }
    if 2 * n <= 12 {
        let full = SchemeAConfig::new(n, SmallBiasSet::full_space(2 * n)?, spec.epsilon, spec.mode)?;
        header.push(format!("A-full: all {} Pauli words, the perfect pad", 1u64 << (2 * n)));
        for (label, rho) in states.iter().filter(|(l, _)| l == "plus" || l == "random0") {
            rows.push(distance_row("A-full", label, &scheme_a_channel(&full, rho)?, 0.0)?);
        }
    }
    Ok(rows)
}

fn verify_b(
    spec: &ExperimentSpec,
    states: &[(String, DensityMatrix)],
    header: &mut Vec<String>,
) -> Result<Vec<VerifyRow>> {
    let n = spec.n;
    let cfg = match spec.b_k {
        Some(k) => SchemeBConfig::new(n, k, spec.epsilon, spec.mode)?,
        None => SchemeBConfig::for_epsilon(n, spec.epsilon, spec.mode)?,
    };
    if spec.b_tag_samples.is_none() && n > MAX_FULL_B_QUBITS {
        return Err(Error::ResourceLimit(format!(
            "the full scheme B cq-channel needs n ≤ {MAX_FULL_B_QUBITS}; pass --n {MAX_FULL_B_QUBITS} or smaller, \
             or --tag-samples to check a sample of tags"
        )));
    }
    let mut configs = vec![("B".to_string(), cfg)];
    // A capped k is the perfect pad; also exercise the bound at k = n.
    if spec.b_k.is_none() && configs[0].1.k() == 2 * n {
        configs.push((format!("B-k{n}"), SchemeBConfig::new(n, n, spec.epsilon, spec.mode)?));
    }
    let mut rows = Vec::new();
    for (name, cfg) in &configs {
        header.push(format!(
            "{name}: k={} (n + 2*ceil(log2(1/eps)) = {}, capped at 2n) design_bias={:e} certified_rms_bias={:e} secure={}{}",
            cfg.k(),
            SchemeBConfig::k_for(n, spec.epsilon),
            cfg.design_bias(),
            cfg.certified_bias()?,
            cfg.is_secure(),
            match spec.b_tag_samples {
                Some(s) => format!(" sampled_tags={s} (rows check the purity bound only)"),
                None => String::new(),
            }
        ));
        for (label, rho) in states {
            let cq = match spec.b_tag_samples {
                Some(s) => scheme_b_channel_sampled(cfg, rho, s, spec.seed)?,
                None => scheme_b_channel(cfg, rho)?,
            };
            let dim = cq.branches().len() * cq.block_dim();
            let p = cq.purity();
            let dist = cq.distance_from_uniform()?;
            rows.push(match spec.b_tag_samples {
                Some(_) => VerifyRow::new(name, label, dim, p, dist, "via_purity", dist, fact_trace2_epsilon(p, dim)),
                None => VerifyRow::new(name, label, dim, p, dist, "distance", dist, cfg.distance_bound()),
            });
        }
    }
    Ok(rows)
}

fn verify_c(
    spec: &ExperimentSpec,
    states: &[(String, DensityMatrix)],
    header: &mut Vec<String>,
) -> Result<Vec<VerifyRow>> {
    let n = spec.n;
    let d = smallest_odd_prime_at_least(1 << n) as usize;
    let bits = SchemeCConfig::phase_bits(d);
    let field = spec.c_field.unwrap_or_else(|| field_for(bits, spec.epsilon));
    let cfg = SchemeCConfig::new(n, aghp_set(bits, field)?, spec.epsilon)?;
    header.push(format!(
        "C: d={d}, AGHP phase set over {bits} bits, field degree {field}, |B|={} certified_bias={:e} secure={} key_bits={:.3}",
        cfg.set().len(),
        cfg.certified_bias(),
        cfg.is_secure(),
        cfg.key_bits()
    ));
    header.push("C: the Weyl average runs over a = 0..d-1 with weight 1/d; the phase average has weight 1/|B|".into());
    let mut rows = Vec::new();
    for (label, rho) in states {
        let out = scheme_c_channel(&cfg, &embed_qubits(rho, d)?)?;
        rows.push(distance_row("C", label, &out, cfg.certified_bias())?);
    }
    let uniform = DensityMatrix::uniform_superposition(3);
    let out = scheme_c_core_channel(3, &uniform)?;
    let dist = trace_distance(&out, &DensityMatrix::maximally_mixed(3))?;
    let bound = (1.0 + purity(&uniform)) / 3.0;
    rows.push(VerifyRow::new("C-core", "uniform3", 3, purity(&out), dist, "purity", purity(&out), bound));
    Ok(rows)
}

/// Runs every requested scheme over the fixed suite and the random trials.
pub fn run_verify(spec: &ExperimentSpec) -> Result<VerifyReport> {
    if spec.n == 0 || spec.n > MAX_VERIFY_QUBITS {
        return Err(Error::ResourceLimit(format!(
            "exact channels are evaluated for 1 ≤ n ≤ {MAX_VERIFY_QUBITS}; pass a smaller --n"
        )));
    }
    if !(spec.epsilon > 0.0 && spec.epsilon <= 1.0) {
        return invalid(format!("epsilon {} outside (0, 1]", spec.epsilon));
    }
    if spec.schemes.is_empty() {
        return invalid("no schemes selected");
    }
    let names: Vec<String> = spec.schemes.iter().map(|s| s.to_string()).collect();
    let mut header = vec![format!(
        "qpad verify schemes={} n={} epsilon={} trials={} seed={} prng=ChaCha8 mode={:?}",
        names.join(","),
        spec.n,
        spec.epsilon,
        spec.trials,
        spec.seed,
        spec.mode
    )];
    let states = test_states(spec.n, spec.trials, spec.seed)?;
    let mut rows = Vec::new();
    for scheme in &spec.schemes {
        rows.extend(match scheme {
            SchemeKind::A => verify_a(spec, &states, &mut header)?,
            SchemeKind::B => verify_b(spec, &states, &mut header)?,
            SchemeKind::C => verify_c(spec, &states, &mut header)?,
        });
    }
    Ok(VerifyReport { header, rows })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_spec_passes() {
        let report = run_verify(&ExperimentSpec::default()).unwrap();
        assert!(report.all_pass(), "{}", report.render(OutputFormat::Table).unwrap());
        let full: Vec<_> = report.rows.iter().filter(|r| r.scheme == "A-full").collect();
        assert!(!full.is_empty() && full.iter().all(|r| r.distance < 1e-12));
        let core = report.rows.iter().find(|r| r.scheme == "C-core").unwrap();
        assert!((core.purity - 5.0 / 9.0).abs() < 1e-12);
    }

    #[test]
    fn csv_round_trip() {
        let spec =
            ExperimentSpec { schemes: vec![SchemeKind::A, SchemeKind::C], n: 1, trials: 2, ..Default::default() };
        let report = run_verify(&spec).unwrap();
        let text = report.render(OutputFormat::Csv).unwrap();
        assert!(text.starts_with("# qpad verify"));
        assert_eq!(parse_csv_rows(&text).unwrap(), report.rows);
    }

    #[test]
    fn deterministic() {
        let spec = ExperimentSpec { trials: 3, seed: 9, ..Default::default() };
        let a = run_verify(&spec).unwrap().render(OutputFormat::Table).unwrap();
        let b = run_verify(&spec).unwrap().render(OutputFormat::Table).unwrap();
        assert_eq!(a, b);
        assert!(a.contains("seed=9"));
    }

    #[test]
    fn resource_limits_are_actionable() {
        let spec = ExperimentSpec { n: 6, ..Default::default() };
        assert!(matches!(run_verify(&spec), Err(Error::ResourceLimit(_))));
        let spec = ExperimentSpec { n: 4, schemes: vec![SchemeKind::B], ..Default::default() };
        let Err(Error::ResourceLimit(msg)) = run_verify(&spec) else { panic!("expected a resource limit") };
        assert!(msg.contains("--n"));
    }

    #[test]
    fn field_choice() {
        assert_eq!(field_for(4, 0.25), 4);
        assert_eq!(field_for(2, 0.5), 1);
        assert_eq!(field_for(64, 1e-9), 13);
    }
}
