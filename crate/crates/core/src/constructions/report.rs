use std::fmt::Write as _;

use serde::Serialize;

use crate::combinatorics::binomial;
use crate::counting::{spectrum, CountOptions, Spectrum};
use crate::error::Result;
use crate::geometry::PointSet;

use super::formulas::formula_tables;
use super::oracle::{integer_oracle, oracle_scan};

pub const LARGE_N_CAVEAT: &str =
    "Closed-form extremal values are guaranteed only for n >= C d^3 2^d \
with an unspecified absolute constant C; differences at small n are findings, not failures.";

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReportRow {
    pub quantity: String,
    pub engine: u64,
    /// Exact prediction for this very configuration.
    pub predicted: Option<u64>,
    pub prediction_source: Option<String>,
    /// Extremal value from the closed forms.
    pub formula: Option<u64>,
    /// Residue-oracle optimum over all offsets (cosets only).
    pub oracle_optimum: Option<u64>,
}

impl ReportRow {
    pub fn engine_matches_prediction(&self) -> Option<bool> {
        self.predicted.map(|p| p == self.engine)
    }

    pub fn optimum_matches_formula(&self) -> Option<bool> {
        Some(self.oracle_optimum? == self.formula?)
    }

    pub fn engine_matches_formula(&self) -> Option<bool> {
        self.formula.map(|f| f == self.engine)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CompareReport {
    pub generator: String,
    pub d: usize,
    pub n: usize,
    pub l: Option<i64>,
    pub spectrum: Spectrum,
    pub rows: Vec<ReportRow>,
    pub notes: Vec<String>,
}

impl CompareReport {
    /// False when the engine disagrees with an exact per-configuration
    /// prediction. Formula differences never fail a report.
    pub fn consistent(&self) -> bool {
        self.rows
            .iter()
            .all(|r| r.engine_matches_prediction() != Some(false))
    }

    pub fn to_markdown(&self) -> String {
        let mut out = String::new();
        writeln!(out, "# Comparison report\n").unwrap();
        write!(
            out,
            "generator: {}, d = {}, n = {}",
            self.generator, self.d, self.n
        )
        .unwrap();
        if let Some(l) = self.l {
            write!(out, ", l = {l}").unwrap();
        }
        writeln!(out, "\n").unwrap();
        let spec: Vec<String> = self
            .spectrum
            .counts
            .iter()
            .map(|(m, c)| format!("N_{m} = {c}"))
            .collect();
        writeln!(out, "spectrum: {}\n", spec.join(", ")).unwrap();
        writeln!(
            out,
            "| quantity | engine | predicted | source | engine = predicted | formula | oracle optimum | optimum = formula |"
        )
        .unwrap();
        writeln!(out, "|---|---|---|---|---|---|---|---|").unwrap();
        let opt = |v: Option<u64>| v.map_or("-".to_string(), |x| x.to_string());
        let flag = |v: Option<bool>| match v {
            Some(true) => "yes",
            Some(false) => "no",
            None => "-",
        };
        for r in &self.rows {
            writeln!(
                out,
                "| {} | {} | {} | {} | {} | {} | {} | {} |",
                r.quantity,
                r.engine,
                opt(r.predicted),
                r.prediction_source.as_deref().unwrap_or("-"),
                flag(r.engine_matches_prediction()),
                opt(r.formula),
                opt(r.oracle_optimum),
                flag(r.optimum_matches_formula()),
            )
            .unwrap();
        }
        writeln!(out).unwrap();
        for note in &self.notes {
            writeln!(out, "- {note}").unwrap();
        }
        out
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from(
            "quantity,engine,predicted,source,engine_matches_prediction,formula,oracle_optimum,optimum_matches_formula\n",
        );
        let opt = |v: Option<u64>| v.map_or(String::new(), |x| x.to_string());
        let flag = |v: Option<bool>| v.map_or(String::new(), |x| x.to_string());
        for r in &self.rows {
            writeln!(
                out,
                "{},{},{},{},{},{},{},{}",
                r.quantity,
                r.engine,
                opt(r.predicted),
                r.prediction_source.as_deref().unwrap_or(""),
                flag(r.engine_matches_prediction()),
                opt(r.formula),
                opt(r.oracle_optimum),
                flag(r.optimum_matches_formula()),
            )
            .unwrap();
        }
        out
    }
}

/// Engine spectrum next to whatever the generator recorded in the metadata
/// lets us predict.
pub fn compare_report(p: &PointSet, opts: &CountOptions) -> Result<CompareReport> {
    let s = spectrum(p, opts)?;
    let d = p.dimension();
    let n = p.len();
    let meta = p.metadata();
    let generator = meta.generator.clone().unwrap_or_else(|| "unknown".into());
    let formula = formula_tables(d, n).ok();
    let mut notes = vec![LARGE_N_CAVEAT.to_string()];
    let mut rows = Vec::new();
    let mut l = None;
    match generator.as_str() {
        "coset" if meta.l.is_some() && d % 2 == 0 => {
            let off = meta.l.unwrap_or(0);
            l = Some(off);
            let o = integer_oracle(n, d, off, opts.threads)?;
            let scan = oracle_scan(n, d, opts.threads)?;
            rows.push(ReportRow {
                quantity: "ordinary".into(),
                engine: s.ordinary(),
                predicted: Some(o.ordinary),
                prediction_source: Some("residue oracle".into()),
                formula: formula.as_ref().and_then(|f| f.min_ordinary_u64()),
                oracle_optimum: Some(scan.best.ordinary),
            });
            rows.push(ReportRow {
                quantity: "dplus2".into(),
                engine: s.next(),
                predicted: Some(o.dplus2),
                prediction_source: Some("residue oracle".into()),
                formula: formula.as_ref().and_then(|f| f.max_dplus2_u64()),
                oracle_optimum: Some(scan.best.dplus2),
            });
            notes.push(format!(
                "residue-oracle optimum attained at offset l = {} (offsets matter modulo n)",
                scan.best.l
            ));
        }
        "trivial" => {
            rows.push(ReportRow {
                quantity: "ordinary".into(),
                engine: s.ordinary(),
                predicted: Some(binomial((n - 1) as u64, d as u64) as u64),
                prediction_source: Some("C(n-1, d)".into()),
                formula: formula.as_ref().and_then(|f| f.min_ordinary_u64()),
                oracle_optimum: None,
            });
            rows.push(ReportRow {
                quantity: format!("N_{}", n - 1),
                engine: s.get(n - 1),
                predicted: Some(1),
                prediction_source: Some("carrier hypersphere".into()),
                formula: None,
                oracle_optimum: None,
            });
        }
        _ => {
            notes.push("no expected value; empirical only".into());
            rows.push(ReportRow {
                quantity: "ordinary".into(),
                engine: s.ordinary(),
                predicted: None,
                prediction_source: None,
                formula: formula.as_ref().and_then(|f| f.min_ordinary_u64()),
                oracle_optimum: None,
            });
            rows.push(ReportRow {
                quantity: "dplus2".into(),
                engine: s.next(),
                predicted: None,
                prediction_source: None,
                formula: formula.as_ref().and_then(|f| f.max_dplus2_u64()),
                oracle_optimum: None,
            });
        }
    }
    if !s.certified() {
        notes.push(format!(
            "{} subsets could not be decided; counts are not certified",
            s.indeterminate_count
        ));
    }
    Ok(CompareReport {
        generator,
        d,
        n,
        l,
        spectrum: s,
        rows,
        notes,
    })
}
