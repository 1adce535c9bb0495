//! Report types emitted by the solver: one per instance, plus batch
//! aggregates. Rationals are serialized as exact "p/q" strings with a
//! convenience decimal alongside; the exact form is authoritative. Stage
//! timings are shown in human-readable output only, so machine reports stay
//! byte-identical across runs.

use crate::rat::{rat_decimal, rat_str, Rat};
use serde::{Deserialize, Serialize};

/// Decimal digits rendered next to each exact rational.
const DECIMALS: u32 = 6;

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct CheckOutcome {
    pub check: String,
    /// "passed" or "skipped"; failures abort the pipeline instead.
    pub status: String,
    pub detail: String,
}

impl CheckOutcome {
    pub fn passed(check: &str, detail: String) -> CheckOutcome {
        CheckOutcome { check: check.to_string(), status: "passed".to_string(), detail }
    }

    pub fn skipped(check: &str, detail: String) -> CheckOutcome {
        CheckOutcome { check: check.to_string(), status: "skipped".to_string(), detail }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct SolutionReport {
    pub id: String,
    pub n: usize,
    pub m: usize,
    pub s: usize,
    pub t: usize,
    /// Relaxation optimum, exact.
    pub lp_value: String,
    pub lp_value_decimal: String,
    /// Deficient s-side cuts, innermost first.
    pub narrow_cut_count: usize,
    pub narrow_cuts: Vec<Vec<usize>>,
    pub tree_size: usize,
    /// Vertices whose tree degree parity needed fixing.
    pub wrong_degree: Vec<usize>,
    pub join_size: usize,
    /// Vertex sequence of the trail through tree plus join.
    pub trail: Vec<usize>,
    /// Final spanning s-t path and its metric cost.
    pub path: Vec<usize>,
    pub cost: u64,
    /// Exact optimum, present when the reference search ran.
    pub opt: Option<u64>,
    pub ratio_lp: String,
    pub ratio_lp_decimal: String,
    pub ratio_opt: Option<String>,
    pub ratio_opt_decimal: Option<String>,
    pub verify: Vec<CheckOutcome>,
    /// Wall-clock stage timings; never serialized so reports stay
    /// byte-identical across runs.
    #[serde(skip)]
    pub timings_ms: Vec<(String, f64)>,
}

pub fn ratio_strings(value: &Rat) -> (String, String) {
    (rat_str(value), rat_decimal(value, DECIMALS))
}

pub const CSV_HEADER: &str = "id,n,m,lp_value,k,tree_size,join_size,cost,opt,ratio_lp,ratio_opt";

impl SolutionReport {
    pub fn csv_row(&self) -> String {
        let opt = self.opt.map(|o| o.to_string()).unwrap_or_default();
        let ratio_opt = self.ratio_opt.clone().unwrap_or_default();
        format!(
            "{},{},{},{},{},{},{},{},{},{},{}",
            self.id,
            self.n,
            self.m,
            self.lp_value,
            self.narrow_cut_count,
            self.tree_size,
            self.join_size,
            self.cost,
            opt,
            self.ratio_lp,
            ratio_opt
        )
    }

    pub fn render_human(&self) -> String {
        let mut out = String::new();
        let mut line = |s: String| {
            out.push_str(&s);
            out.push('\n');
        };
        line(format!("instance {}", self.id));
        line(format!("  n={} m={} s={} t={}", self.n, self.m, self.s, self.t));
        line(format!("  relaxation value {} ({})", self.lp_value, self.lp_value_decimal));
        line(format!("  narrow cuts {}", self.narrow_cut_count));
        for cut in &self.narrow_cuts {
            line(format!("    {cut:?}"));
        }
        line(format!(
            "  tree edges {}  wrong degree {:?}  join edges {}",
            self.tree_size, self.wrong_degree, self.join_size
        ));
        line(format!("  path {:?}  cost {}", self.path, self.cost));
        line(format!("  cost/relaxation {} ({})", self.ratio_lp, self.ratio_lp_decimal));
        if let (Some(opt), Some(r), Some(d)) =
            (self.opt, self.ratio_opt.as_ref(), self.ratio_opt_decimal.as_ref())
        {
            line(format!("  optimum {opt}  cost/optimum {r} ({d})"));
        }
        for check in &self.verify {
            line(format!("  verify {}: {} {}", check.check, check.status, check.detail));
        }
        for (stage, ms) in &self.timings_ms {
            line(format!("  time {stage} {ms:.2}ms"));
        }
        out
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct InstanceFailure {
    pub id: String,
    pub error: String,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct BatchSummary {
    pub instances: usize,
    pub failed: usize,
    pub max_ratio_lp: Option<String>,
    pub max_ratio_lp_instance: Option<String>,
    pub max_ratio_opt: Option<String>,
    pub max_ratio_opt_instance: Option<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct BatchReport {
    pub reports: Vec<SolutionReport>,
    pub failures: Vec<InstanceFailure>,
    pub summary: BatchSummary,
}

impl BatchReport {
    pub fn csv(&self) -> String {
        let mut out = String::from(CSV_HEADER);
        out.push('\n');
        for report in &self.reports {
            out.push_str(&report.csv_row());
            out.push('\n');
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::ratio;

    fn sample() -> SolutionReport {
        let (ratio_lp, ratio_lp_decimal) = ratio_strings(&ratio(4, 3));
        SolutionReport {
            id: "sample".to_string(),
            n: 4,
            m: 3,
            s: 0,
            t: 2,
            lp_value: "3".to_string(),
            lp_value_decimal: "3.000000".to_string(),
            narrow_cut_count: 2,
            narrow_cuts: vec![vec![0], vec![0, 1, 3]],
            tree_size: 3,
            wrong_degree: vec![1, 3],
            join_size: 1,
            trail: vec![0, 1, 3, 1, 2],
            path: vec![0, 1, 3, 2],
            cost: 4,
            opt: Some(4),
            ratio_lp,
            ratio_lp_decimal,
            ratio_opt: Some("1".to_string()),
            ratio_opt_decimal: Some("1.000000".to_string()),
            verify: vec![CheckOutcome::passed("optimal path", "opt=4".to_string())],
            timings_ms: vec![("relaxation".to_string(), 1.5)],
        }
    }

    #[test]
    fn json_roundtrips_and_drops_timings() {
        let report = sample();
        let json = serde_json::to_string_pretty(&report).unwrap();
        assert!(!json.contains("timings"));
        let back: SolutionReport = serde_json::from_str(&json).unwrap();
        assert!(back.timings_ms.is_empty());
        let mut original = report.clone();
        original.timings_ms.clear();
        assert_eq!(back, original);
    }

    #[test]
    fn csv_row_matches_header_width() {
        let report = sample();
        let row = report.csv_row();
        assert_eq!(row.split(',').count(), CSV_HEADER.split(',').count());
        assert_eq!(row, "sample,4,3,3,2,3,1,4,4,4/3,1");
        let mut missing = report;
        missing.opt = None;
        missing.ratio_opt = None;
        assert_eq!(missing.csv_row(), "sample,4,3,3,2,3,1,4,,4/3,");
    }

    #[test]
    fn human_rendering_mentions_the_essentials() {
        let text = sample().render_human();
        assert!(text.contains("relaxation value 3"));
        assert!(text.contains("cost 4"));
        assert!(text.contains("verify optimal path: passed"));
        assert!(text.contains("time relaxation"));
    }

    #[test]
    fn ratio_rendering_is_exact_plus_decimal() {
        let (exact, decimal) = ratio_strings(&ratio(7, 5));
        assert_eq!(exact, "7/5");
        assert_eq!(decimal, "1.400000");
        let (exact, decimal) = ratio_strings(&ratio(6, 3));
        assert_eq!(exact, "2");
        assert_eq!(decimal, "2.000000");
    }
}
