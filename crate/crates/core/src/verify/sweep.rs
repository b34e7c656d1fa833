use std::io::{BufRead, Write};
use std::ops::RangeInclusive;
use std::path::PathBuf;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::instance::{cross_validate_instance, verify_theorem_instance};
use super::{ConformanceRecord, Verdict};
use crate::caterpoly::default_cond3_range;
use crate::error::{Error, Result};
use crate::shape::ShapeReport;
use crate::treegraph::{CaterpillarSpec, DEFAULT_CAP, MAX_CAP};

/// Which oracles join the cross-validation.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Oracle {
    /// Brute force whenever the instance fits under the cap.
    #[default]
    Auto,
    /// Brute force on every instance; the sweep bounds must fit under the cap.
    Brute,
    /// Recursion, tree DP and deletion only.
    Scalable,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepConfig {
    pub m_bounds: (usize, usize),
    pub n_bounds: (usize, usize),
    pub monotone_only: bool,
    pub oracle: Oracle,
    pub cap: usize,
    /// `None` means `[3, n]` per instance.
    pub cond3_range: Option<(usize, usize)>,
    /// Worker threads; 0 lets rayon decide.
    pub jobs: usize,
    pub output: Option<PathBuf>,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            m_bounds: (1, 4),
            n_bounds: (1, 4),
            monotone_only: false,
            oracle: Oracle::Auto,
            cap: DEFAULT_CAP,
            cond3_range: None,
            jobs: 0,
            output: None,
        }
    }
}

impl SweepConfig {
    pub fn validate(&self) -> Result<()> {
        let (m_lo, m_hi) = self.m_bounds;
        let (n_lo, n_hi) = self.n_bounds;
        if m_lo == 0 || n_lo == 0 {
            return Err(Error::Parameter("sweep bounds must be positive".into()));
        }
        if self.cap > MAX_CAP {
            return Err(Error::CapTooLarge(self.cap));
        }
        if self.oracle == Oracle::Brute && n_lo <= n_hi && m_lo <= m_hi {
            let largest = n_hi * (m_hi + 1);
            if largest > self.cap {
                return Err(Error::Parameter(format!(
                    "brute-force oracle needs every instance under the cap {}, but bounds reach {largest} vertices",
                    self.cap
                )));
            }
        }
        Ok(())
    }

    fn cond3_for(&self, n: usize) -> RangeInclusive<usize> {
        match self.cond3_range {
            Some((lo, hi)) => lo..=hi,
            None => default_cond3_range(n),
        }
    }

    fn effective_cap(&self) -> usize {
        match self.oracle {
            Oracle::Scalable => 0,
            _ => self.cap,
        }
    }
}

/// Every spec within bounds, in lexicographic order of `m`.
pub fn enumerate_specs(config: &SweepConfig) -> Vec<CaterpillarSpec> {
    let (m_lo, m_hi) = config.m_bounds;
    let (n_lo, n_hi) = config.n_bounds;
    let mut specs = Vec::new();
    if m_lo == 0 || m_lo > m_hi {
        return specs;
    }
    for n in n_lo.max(1)..=n_hi {
        let mut m = vec![m_lo; n];
        loop {
            if !config.monotone_only || m.windows(2).all(|w| w[0] <= w[1]) {
                specs.push(CaterpillarSpec::new(m.clone()).expect("bounds are positive"));
            }
            // Odometer increment, last position fastest.
            let Some(pos) = m.iter().rposition(|&v| v < m_hi) else {
                break;
            };
            m[pos] += 1;
            m[pos + 1..].iter_mut().for_each(|v| *v = m_lo);
        }
    }
    specs.sort();
    specs
}

/// Reads one comma-separated `m` per line; blank lines and `#` comments skipped.
pub fn read_spec_list<R: BufRead>(reader: R) -> Result<Vec<CaterpillarSpec>> {
    let mut specs = Vec::new();
    for line in reader.lines() {
        let line = line?;
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let m = line
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<usize>()
                    .map_err(|_| Error::InvalidSpec(format!("bad entry {t:?} in {line:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        specs.push(CaterpillarSpec::new(m)?);
    }
    Ok(specs)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InstanceRecord {
    pub spec: CaterpillarSpec,
    pub degree: usize,
    pub multiplicity: usize,
    pub p_modes: Vec<usize>,
    pub cross_validation: ConformanceRecord,
    pub theorem: ConformanceRecord,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerdictCounts {
    pub conform: usize,
    pub nonconform: usize,
    pub hypothesis_not_met: usize,
}

impl VerdictCounts {
    fn add(&mut self, v: Verdict) {
        match v {
            Verdict::Conform => self.conform += 1,
            Verdict::Nonconform => self.nonconform += 1,
            Verdict::HypothesisNotMet => self.hypothesis_not_met += 1,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepSummary {
    pub instances: usize,
    pub cross_validation: VerdictCounts,
    pub theorem: VerdictCounts,
    /// Specs with at least one nonconform record, in sweep order.
    pub nonconform_specs: Vec<String>,
}

impl SweepSummary {
    pub fn any_nonconform(&self) -> bool {
        !self.nonconform_specs.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepReport {
    pub records: Vec<InstanceRecord>,
    pub summary: SweepSummary,
}

fn run_instance(spec: &CaterpillarSpec, config: &SweepConfig) -> InstanceRecord {
    let cross_validation = cross_validate_instance(spec, config.effective_cap());
    let theorem = verify_theorem_instance(spec, config.cond3_for(spec.n()));
    let p_shape: ShapeReport = theorem.observed_as("p_shape").expect("theorem record carries p_shape");
    let multiplicity = cross_validation
        .observed_as("multiplicity")
        .expect("cross-validation record carries multiplicity");
    InstanceRecord {
        spec: spec.clone(),
        degree: spec.leaf_count(),
        multiplicity,
        p_modes: p_shape.modes,
        cross_validation,
        theorem,
    }
}

/// Runs both instance checks on every spec; output order follows `specs`
/// regardless of the worker count.
pub fn run_sweep(specs: &[CaterpillarSpec], config: &SweepConfig) -> Result<SweepReport> {
    config.validate()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.jobs)
        .build()
        .map_err(|e| Error::Parameter(e.to_string()))?;
    let records: Vec<InstanceRecord> = pool.install(|| specs.par_iter().map(|s| run_instance(s, config)).collect());

    let mut summary = SweepSummary {
        instances: records.len(),
        ..Default::default()
    };
    for r in &records {
        summary.cross_validation.add(r.cross_validation.verdict);
        summary.theorem.add(r.theorem.verdict);
        if r.cross_validation.is_nonconform() || r.theorem.is_nonconform() {
            summary.nonconform_specs.push(r.spec.to_string());
        }
    }
    Ok(SweepReport { records, summary })
}

/// Enumerates the family, runs it, and writes JSON lines to `config.output` if set.
pub fn sweep_family(config: &SweepConfig) -> Result<SweepReport> {
    let specs = enumerate_specs(config);
    let report = run_sweep(&specs, config)?;
    if let Some(path) = &config.output {
        let file = std::io::BufWriter::new(std::fs::File::create(path)?);
        write_jsonl(&report, file)?;
    }
    Ok(report)
}

/// One instance record per line, then `{"summary": ...}`.
pub fn write_jsonl<W: Write>(report: &SweepReport, mut out: W) -> Result<()> {
    for r in &report.records {
        serde_json::to_writer(&mut out, r)?;
        out.write_all(b"\n")?;
    }
    serde_json::to_writer(&mut out, &serde_json::json!({ "summary": report.summary }))?;
    out.write_all(b"\n")?;
    out.flush()?;
    Ok(())
}

/// `m, n, cross_validation, theorem, modes, k, d` per instance.
pub fn write_csv<W: Write>(report: &SweepReport, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["m", "n", "cross_validation", "theorem", "modes", "k", "d"])?;
    for r in &report.records {
        let join = |v: &[usize], sep: &str| v.iter().map(ToString::to_string).collect::<Vec<_>>().join(sep);
        w.write_record([
            join(r.spec.m(), ","),
            r.spec.n().to_string(),
            r.cross_validation.verdict.to_string(),
            r.theorem.verdict.to_string(),
            join(&r.p_modes, " "),
            r.multiplicity.to_string(),
            r.degree.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bounds(m: (usize, usize), n: (usize, usize), monotone_only: bool) -> SweepConfig {
        SweepConfig {
            m_bounds: m,
            n_bounds: n,
            monotone_only,
            ..Default::default()
        }
    }

    #[test]
    fn enumeration_counts() {
        assert_eq!(enumerate_specs(&bounds((1, 4), (1, 4), false)).len(), 340);
        assert_eq!(enumerate_specs(&bounds((1, 4), (1, 4), true)).len(), 69);
        assert!(enumerate_specs(&bounds((1, 4), (3, 2), false)).is_empty());
    }

    #[test]
    fn enumeration_is_lexicographic() {
        let specs = enumerate_specs(&bounds((1, 2), (1, 2), false));
        let ms: Vec<&[usize]> = specs.iter().map(|s| s.m()).collect();
        assert_eq!(ms, vec![&[1][..], &[1, 1], &[1, 2], &[2], &[2, 1], &[2, 2]]);
    }

    #[test]
    fn empty_sweep() {
        let report = sweep_family(&bounds((1, 4), (2, 1), false)).unwrap();
        assert_eq!(report.summary, SweepSummary::default());
    }

    #[test]
    fn brute_oracle_needs_small_bounds() {
        let mut c = bounds((1, 9), (1, 4), false);
        c.oracle = Oracle::Brute;
        assert!(matches!(c.validate(), Err(Error::Parameter(_))));
        c.m_bounds = (1, 4);
        assert!(c.validate().is_ok());
    }

    #[test]
    fn spec_list_parsing() {
        let text = "# family\n3,4\n\n 4, 9, 9, 10\n";
        let specs = read_spec_list(text.as_bytes()).unwrap();
        assert_eq!(specs.len(), 2);
        assert_eq!(specs[1].m(), &[4, 9, 9, 10]);
        assert!(read_spec_list("3,x\n".as_bytes()).is_err());
        assert!(read_spec_list("3,0\n".as_bytes()).is_err());
    }

    #[test]
    fn csv_and_jsonl_outputs() {
        let c = bounds((3, 4), (2, 2), true);
        let report = sweep_family(&c).unwrap();
        assert_eq!(report.summary.instances, 3);

        let mut csv_out = Vec::new();
        write_csv(&report, &mut csv_out).unwrap();
        let text = String::from_utf8(csv_out).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("m,n,cross_validation,theorem,modes,k,d"));
        assert_eq!(lines.next(), Some("\"3,3\",2,conform,hypothesis-not-met,3,3,6"));

        let mut json_out = Vec::new();
        write_jsonl(&report, &mut json_out).unwrap();
        let text = String::from_utf8(json_out).unwrap();
        assert_eq!(text.lines().count(), 4);
        let last: serde_json::Value = serde_json::from_str(text.lines().last().unwrap()).unwrap();
        assert_eq!(last["summary"]["instances"], 3);
    }
}
