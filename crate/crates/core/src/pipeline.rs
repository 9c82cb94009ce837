//! End-to-end bound chain for `F_n^{(k)} = m·2^m + 1`.

use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::baker::{
    constant_from_f64, k_bound_from_laurent, largest_int_below, n_from_m, theorem2_m_bound,
    KFromMMode, MBoundMode,
};
use crate::enclosure::{RealEnclosure, DEFAULT_PRECISION_BITS, MAX_PRECISION_BITS};
use crate::error::{invalid, Error, Result};
use crate::reduction::{run_reduction, ReductionConfig, ReductionTrace, BOUND_DIGITS};

/// Published targets the chain is compared against.
pub const TARGET_K: u64 = 158;
pub const TARGET_M: &str = "9.5e23";
pub const TARGET_N: &str = "2.4e24";

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(default, deny_unknown_fields)]
pub struct PipelineConfig {
    pub precision_bits: u32,
    pub laurent_c2: f64,
    pub k_from_m_mode: KFromMMode,
    pub include_3_6_factor: bool,
    pub m_bound_mode: MBoundMode,
    pub output_path: Option<String>,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            precision_bits: DEFAULT_PRECISION_BITS,
            laurent_c2: 13.1,
            k_from_m_mode: KFromMMode::Paper,
            include_3_6_factor: false,
            m_bound_mode: MBoundMode::Paper,
            output_path: None,
        }
    }
}

impl PipelineConfig {
    pub fn from_json(s: &str) -> Result<PipelineConfig> {
        let c: PipelineConfig =
            serde_json::from_str(s).map_err(|e| Error::Parse(format!("config: {e}")))?;
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<()> {
        if self.precision_bits < 64 || self.precision_bits > MAX_PRECISION_BITS {
            return invalid(format!(
                "precision_bits must be in 64..={MAX_PRECISION_BITS}, got {}",
                self.precision_bits
            ));
        }
        if !(self.laurent_c2.is_finite() && self.laurent_c2 > 0.0) {
            return invalid("laurent_c2 must be a positive number");
        }
        Ok(())
    }

    pub fn reduction_config(&self) -> ReductionConfig {
        ReductionConfig {
            include_3_6_factor: self.include_3_6_factor,
            k_from_m_mode: self.k_from_m_mode,
            laurent_c2: self.laurent_c2,
            m_bound_mode: self.m_bound_mode,
            precision_bits: self.precision_bits,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct InitialBounds {
    pub k_raw: u64,
    pub m_raw: String,
    pub n_raw: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct FinalBounds {
    pub k_final: u64,
    pub m_final: String,
    pub n_final: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct PaperTargets {
    pub k: u64,
    pub m: String,
    pub n: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct Theorem2Report {
    pub initial_bounds: InitialBounds,
    pub trace: ReductionTrace,
    pub final_bounds: FinalBounds,
    pub paper_targets: PaperTargets,
    pub matches_paper: bool,
    /// Divergences from the targets and other caveats, one sentence each.
    pub flags: Vec<String>,
    pub provenance: serde_json::Value,
}

impl Theorem2Report {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

fn m_bound_for(k: u64, config: &PipelineConfig) -> Result<RealEnclosure> {
    Ok(theorem2_m_bound(k, config.precision_bits)?
        .select(config.m_bound_mode)
        .clone())
}

/// Largest integer `k` with `k < K(m_bound(k))`, where `K` is the k-bound
/// from the two-logarithm estimate; found by iterating downward from `10^12`.
pub fn k_start_auto(config: &PipelineConfig) -> Result<u64> {
    let c2 = constant_from_f64(config.laurent_c2, config.precision_bits)?;
    let mut k: u64 = 1_000_000_000_000;
    for _ in 0..200 {
        let m = m_bound_for(k, config)?;
        let f = k_bound_from_laurent(&m, &c2, config.k_from_m_mode)?;
        let next = u64::try_from(largest_int_below(&f)?)
            .map_err(|_| Error::InvalidArgument("negative k bound".into()))?;
        if next >= k {
            return Ok(k);
        }
        k = next;
    }
    Err(Error::NoConvergence(
        "k_start iteration did not settle".into(),
    ))
}

/// Run the whole chain: initial bound, reduction loop, final bounds and comparison.
pub fn cmd_bounds_theorem2(config: &PipelineConfig) -> Result<Theorem2Report> {
    config.validate()?;
    let bits = config.precision_bits;
    let k_raw = k_start_auto(config)?;
    let m_raw = m_bound_for(k_raw, config)?;
    let n_raw = n_from_m(&m_raw)?;
    let trace = run_reduction(k_raw, &config.reduction_config())?;
    let k_final = trace.final_k();
    let m_final = m_bound_for(k_final, config)?;
    let n_final = n_from_m(&m_final)?;

    let m_ok = m_final.certainly_lt(&RealEnclosure::from_decimal(TARGET_M, bits)?);
    let n_ok = n_final.certainly_lt(&RealEnclosure::from_decimal(TARGET_N, bits)?);
    let matches_paper = k_final == TARGET_K && m_ok && n_ok;

    let mut flags = Vec::new();
    if k_final != TARGET_K {
        flags.push(format!(
            "final k bound {k_final} differs from the published {TARGET_K}"
        ));
    }
    if !m_ok {
        flags.push(format!("final m bound is not below {TARGET_M}"));
    }
    if !n_ok {
        flags.push(format!("final n bound is not below {TARGET_N}"));
    }
    if !theorem2_m_bound(k_final, bits)?.chain_within_simplified {
        flags.push(
            "the unsimplified 2A log^2 A value exceeds 5.9e13 k^4 log^2 k at the final k".into(),
        );
    }
    if trace.hypothesis_contradicted_at.is_none() {
        flags.push(format!(
            "the loop never went below the hypothesis k >= {}",
            crate::reduction::HYPOTHESIS_K
        ));
    }

    let provenance = json!({
        "config": config,
        "precision_bits": bits,
        "laurent_c2": config.laurent_c2,
        "k_from_m": match config.k_from_m_mode {
            KFromMMode::Paper => "21761 log m",
            KFromMMode::Computed => "(2/log 2)(log 3.6 + 576 C2 log m)",
        },
        "m_bound": match config.m_bound_mode {
            MBoundMode::Paper => "5.9e13 k^4 log^2 k",
            MBoundMode::Chain => "2A log^2 A, A = 9.7e11 k^4 log k",
        },
        "fractional_part_inequality": if config.include_3_6_factor {
            "3.6 * 2^(-k/2) > min * log 2"
        } else {
            "2^(-k/2) > min * log 2"
        },
        "version": env!("CARGO_PKG_VERSION"),
    });

    Ok(Theorem2Report {
        initial_bounds: InitialBounds {
            k_raw,
            m_raw: m_raw.hi_decimal(BOUND_DIGITS),
            n_raw: n_raw.hi_decimal(BOUND_DIGITS),
        },
        trace,
        final_bounds: FinalBounds {
            k_final,
            m_final: m_final.hi_decimal(BOUND_DIGITS),
            n_final: n_final.hi_decimal(BOUND_DIGITS),
        },
        paper_targets: PaperTargets {
            k: TARGET_K,
            m: TARGET_M.into(),
            n: TARGET_N.into(),
        },
        matches_paper,
        flags,
        provenance,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_pipeline_reaches_published_bounds() {
        let r = cmd_bounds_theorem2(&PipelineConfig::default()).unwrap();
        assert!(r.matches_paper, "{:?}", r.flags);
        assert_eq!(r.final_bounds.k_final, 158);
        let ks: Vec<u64> = r.trace.iterations.iter().map(|s| s.k_out).collect();
        assert_eq!(ks[0], 274);
        assert!((2_070_000..2_080_000).contains(&r.initial_bounds.k_raw));
    }

    #[test]
    fn factor_3_6_is_flagged() {
        let cfg = PipelineConfig {
            include_3_6_factor: true,
            ..Default::default()
        };
        let r = cmd_bounds_theorem2(&cfg).unwrap();
        assert_eq!(r.trace.iterations[0].k_out, 277);
        assert!(!r.matches_paper);
        assert!(r.flags.iter().any(|f| f.contains("161")));
    }

    #[test]
    fn low_precision_is_a_precision_failure() {
        let cfg = PipelineConfig {
            precision_bits: 64,
            ..Default::default()
        };
        assert!(matches!(
            cmd_bounds_theorem2(&cfg),
            Err(Error::PrecisionExhausted { .. })
        ));
    }

    #[test]
    fn config_parsing() {
        let c = PipelineConfig::from_json(
            r#"{"include_3_6_factor": true, "k_from_m_mode": "computed"}"#,
        )
        .unwrap();
        assert!(c.include_3_6_factor);
        assert_eq!(c.k_from_m_mode, KFromMMode::Computed);
        assert_eq!(c.precision_bits, 512);
        assert!(PipelineConfig::from_json(r#"{"precision_bits": 32}"#).is_err());
        assert!(PipelineConfig::from_json(r#"{"bogus": 1}"#).is_err());
    }

    #[test]
    fn reports_are_reproducible() {
        let a = cmd_bounds_theorem2(&PipelineConfig::default())
            .unwrap()
            .to_json();
        let b = cmd_bounds_theorem2(&PipelineConfig::default())
            .unwrap()
            .to_json();
        assert_eq!(a, b);
    }
}
