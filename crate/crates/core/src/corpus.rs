//! Corpus enumeration and end-to-end verification runs.

use std::collections::BTreeMap;
use std::io::Write;

use num_bigint::BigInt;
use num_traits::Signed;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use crate::curves::{twisted_tate_isogeny, TwoIsogenyPair, WeierstrassModel};
use crate::descent::{selmer_group, DescentOptions, Direction, SelmerGroup};
use crate::error::{Error, Result};
use crate::localred::{tate_algorithm, ReductionClass};
use crate::parity::{global_report, Flag, IsogenyContext, LocalParityReport};
use crate::symbols::{Place, Sign};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    Two,
    Three,
}

impl std::str::FromStr for Family {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "two" | "2" => Ok(Family::Two),
            "three" | "3" => Ok(Family::Three),
            _ => Err(Error::Parse(format!("unknown family {s:?}"))),
        }
    }
}

/// An inclusive integer range.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Range {
    pub lo: i64,
    pub hi: i64,
}

impl Range {
    pub fn new(lo: i64, hi: i64) -> Result<Self> {
        if lo > hi {
            return Err(Error::Parse(format!("empty range {lo}:{hi}")));
        }
        Ok(Range { lo, hi })
    }

    fn iter(self) -> impl Iterator<Item = i64> {
        self.lo..=self.hi
    }
}

impl std::str::FromStr for Range {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("expected LO:HI, got {s:?}"));
        let (lo, hi) = s.split_once(':').ok_or_else(bad)?;
        Range::new(lo.trim().parse().map_err(|_| bad())?, hi.trim().parse().map_err(|_| bad())?)
    }
}

/// What to enumerate. For [`Family::Two`] the boxes are `(a, b)` with `b`
/// multiplied by `b_mult`; for [`Family::Three`] they are the Tate normal form
/// parameters `(a1, a3)`. Twists apply to both families.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct CorpusSpec {
    pub family: Family,
    pub a_range: Range,
    pub b_range: Range,
    pub twists: Vec<i64>,
    pub b_mult: i64,
    pub max_curves: Option<usize>,
    pub max_abs_disc: Option<u64>,
}

impl CorpusSpec {
    pub fn two_default() -> Self {
        CorpusSpec {
            family: Family::Two,
            a_range: Range { lo: -10, hi: 10 },
            b_range: Range { lo: -10, hi: 10 },
            twists: vec![1],
            b_mult: 1,
            max_curves: None,
            max_abs_disc: None,
        }
    }

    pub fn three_default() -> Self {
        CorpusSpec {
            family: Family::Three,
            a_range: Range { lo: -5, hi: 5 },
            b_range: Range { lo: -5, hi: 5 },
            twists: vec![1, -1, 2, -2, 3, -3, 5, -5],
            b_mult: 1,
            max_curves: None,
            max_abs_disc: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.twists.is_empty() {
            return Err(Error::Parse("no twists given".into()));
        }
        for &d in &self.twists {
            if d == 0 || !crate::arith::is_squarefree(&BigInt::from(d))? {
                return Err(Error::ZeroTwist(d.to_string()));
            }
        }
        if self.b_mult == 0 {
            return Err(Error::Parse("b multiplier must be nonzero".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SkipReason {
    Degenerate,
    SupersingularAt2,
    AdditiveAt2,
    AdditiveAt3,
    Limit,
}

impl SkipReason {
    pub fn as_str(self) -> &'static str {
        match self {
            SkipReason::Degenerate => "degenerate",
            SkipReason::SupersingularAt2 => "supersingular-at-2",
            SkipReason::AdditiveAt2 => "additive-at-2",
            SkipReason::AdditiveAt3 => "additive-at-3",
            SkipReason::Limit => "limit",
        }
    }
}

#[derive(Clone, Debug)]
pub struct CorpusCurve {
    pub index: usize,
    pub id: String,
    pub ctx: IsogenyContext,
}

#[derive(Clone, Debug, Default)]
pub struct Corpus {
    pub curves: Vec<CorpusCurve>,
    pub skipped: BTreeMap<SkipReason, usize>,
    pub candidates: usize,
}

fn hypothesis_skip(ctx: &IsogenyContext) -> Result<Option<SkipReason>> {
    let l = ctx.p();
    let class = tate_algorithm(ctx.source(), l)?.class;
    Ok(match (l, class) {
        (2, ReductionClass::GoodSupersingular) => Some(SkipReason::SupersingularAt2),
        (2, ReductionClass::Additive) => Some(SkipReason::AdditiveAt2),
        (3, ReductionClass::Additive) => Some(SkipReason::AdditiveAt3),
        _ => None,
    })
}

fn candidate(spec: &CorpusSpec, x: i64, y: i64, d: i64) -> Result<(String, IsogenyContext)> {
    match spec.family {
        Family::Two => {
            let (a, b) = (d * x, d * d * y * spec.b_mult);
            Ok((format!("two:a={a},b={b}"), IsogenyContext::Two(TwoIsogenyPair::from_ints(a, b)?)))
        }
        Family::Three => {
            if y == 0 {
                return Err(Error::SingularModel);
            }
            let iso = twisted_tate_isogeny(x, y, d)?;
            Ok((format!("three:a1={x},a3={y},d={d}"), IsogenyContext::Three(iso)))
        }
    }
}

/// Enumerates the corpus in a fixed order (twist, then first, then second
/// parameter), skipping curves outside the theorem hypotheses.
pub fn generate(spec: &CorpusSpec) -> Result<Corpus> {
    spec.validate()?;
    let mut corpus = Corpus::default();
    for &d in &spec.twists {
        for x in spec.a_range.iter() {
            for y in spec.b_range.iter() {
                corpus.candidates += 1;
                let (id, ctx) = match candidate(spec, x, y, d) {
                    Ok(c) => c,
                    Err(Error::SingularModel | Error::DegenerateFamily(_)) => {
                        *corpus.skipped.entry(SkipReason::Degenerate).or_default() += 1;
                        continue;
                    }
                    Err(e) => return Err(e),
                };
                let too_big = spec.max_abs_disc.is_some_and(|m| ctx.source().discriminant().abs() > crate::arith::q(m as i64));
                let full = spec.max_curves.is_some_and(|m| corpus.curves.len() >= m);
                let reason = if too_big || full { Some(SkipReason::Limit) } else { hypothesis_skip(&ctx)? };
                if let Some(r) = reason {
                    *corpus.skipped.entry(r).or_default() += 1;
                    continue;
                }
                let index = corpus.curves.len();
                corpus.curves.push(CorpusCurve { index, id, ctx });
            }
        }
    }
    if corpus.curves.is_empty() {
        return Err(Error::EmptyCorpus);
    }
    Ok(corpus)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct CurveVerdict {
    pub id: String,
    pub family: Family,
    pub source: WeierstrassModel,
    pub target: WeierstrassModel,
    pub places: Vec<LocalParityReport>,
    #[serde(rename = "W", skip_serializing_if = "Option::is_none")]
    pub w: Option<Sign>,
    #[serde(rename = "S", skip_serializing_if = "Option::is_none")]
    pub s: Option<Sign>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle: Option<Sign>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub corollary: Option<Sign>,
    #[serde(rename = "selmer_phi", skip_serializing_if = "Option::is_none")]
    pub selmer_phi: Option<SelmerGroup>,
    #[serde(rename = "selmer_phihat", skip_serializing_if = "Option::is_none")]
    pub selmer_phihat: Option<SelmerGroup>,
    pub pass: bool,
    pub flags: BTreeMap<Flag, usize>,
    /// `(class, detail)` for each failed check.
    pub failures: Vec<(String, String)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunOptions {
    pub seed: u64,
    pub jobs: usize,
    pub fail_fast: bool,
    pub place: Option<Place>,
    pub descent: bool,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions { seed: 0, jobs: 0, fail_fast: false, place: None, descent: true }
    }
}

fn error_class(e: &Error) -> String {
    let name = format!("{e:?}");
    let head = name.split(['(', ' ', '{']).next().unwrap_or("Error");
    format!("error:{head}")
}

fn curve_seed(seed: u64, index: usize) -> u64 {
    seed ^ (index as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15)
}

/// Verifies one curve. Errors are recorded as failures, never raised.
pub fn verify(curve: &CorpusCurve, opts: &RunOptions) -> CurveVerdict {
    let ctx = &curve.ctx;
    let seed = curve_seed(opts.seed, curve.index);
    let mut v = CurveVerdict {
        id: curve.id.clone(),
        family: if ctx.p() == 2 { Family::Two } else { Family::Three },
        source: ctx.source().clone(),
        target: ctx.target().clone(),
        places: Vec::new(),
        w: None,
        s: None,
        oracle: None,
        corollary: None,
        selmer_phi: None,
        selmer_phihat: None,
        pass: false,
        flags: BTreeMap::new(),
        failures: Vec::new(),
    };
    match global_report(ctx, seed) {
        Ok(r) => {
            for p in &r.places {
                for f in &p.flags {
                    *v.flags.entry(*f).or_default() += 1;
                }
            }
            for msg in r.violations {
                let class = if msg.starts_with("local") {
                    "local-identity"
                } else if msg.starts_with("global") {
                    "global"
                } else {
                    "spot-prime"
                };
                v.failures.push((class.into(), msg));
            }
            v.w = Some(r.w_global);
            v.s = Some(r.s_global);
            v.corollary = r.corollary;
            v.places = r.places;
        }
        Err(e) => v.failures.push((error_class(&e), e.to_string())),
    }
    if let (IsogenyContext::Two(pair), true) = (ctx, opts.descent) {
        let dopts = DescentOptions { seed, ..DescentOptions::default() };
        let groups = selmer_group(pair, Direction::Phi, &dopts)
            .and_then(|s| Ok((s, selmer_group(pair, Direction::PhiHat, &dopts)?)));
        match groups {
            Ok((s, s_hat)) => {
                let oracle = Sign::pow_minus_one(s.dimension as i64 - s_hat.dimension as i64);
                if v.s.is_some_and(|s| s != oracle) {
                    v.failures.push(("oracle".into(), format!("descent gives {oracle}, S = {}", v.s.unwrap())));
                }
                v.oracle = Some(oracle);
                v.selmer_phi = Some(s);
                v.selmer_phihat = Some(s_hat);
            }
            Err(e) => v.failures.push((error_class(&e), format!("descent: {e}"))),
        }
    }
    if let Some(place) = opts.place {
        v.places.retain(|p| p.place == place);
    }
    v.pass = v.failures.is_empty();
    v
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Summary {
    pub curves: usize,
    pub passed: usize,
    pub failed: usize,
    pub candidates: usize,
    pub skipped: BTreeMap<&'static str, usize>,
    pub failures: BTreeMap<String, usize>,
    pub flags: BTreeMap<Flag, usize>,
    pub stopped_early: bool,
}

#[derive(Clone, Debug)]
pub struct RunOutcome {
    pub spec: CorpusSpec,
    pub seed: u64,
    pub verdicts: Vec<CurveVerdict>,
    pub summary: Summary,
}

impl RunOutcome {
    pub fn all_passed(&self) -> bool {
        self.summary.failed == 0
    }
}

/// Verifies every corpus curve. Verdicts come back in enumeration order
/// whatever the number of worker threads; with `fail_fast` the run stops
/// after the batch holding the first failure, keeping verdicts up to it.
pub fn run(spec: &CorpusSpec, opts: &RunOptions) -> Result<RunOutcome> {
    let corpus = generate(spec)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(opts.jobs)
        .build()
        .map_err(|e| Error::Parse(format!("thread pool: {e}")))?;
    let mut verdicts = Vec::with_capacity(corpus.curves.len());
    let mut stopped_early = false;
    if opts.fail_fast {
        let batch = pool.current_num_threads().max(1);
        for chunk in corpus.curves.chunks(batch) {
            let vs: Vec<CurveVerdict> = pool.install(|| chunk.par_iter().map(|c| verify(c, opts)).collect());
            if let Some(i) = vs.iter().position(|v| !v.pass) {
                verdicts.extend(vs.into_iter().take(i + 1));
                stopped_early = verdicts.len() < corpus.curves.len();
                break;
            }
            verdicts.extend(vs);
        }
    } else {
        verdicts = pool.install(|| corpus.curves.par_iter().map(|c| verify(c, opts)).collect());
    }
    let mut summary = Summary {
        curves: verdicts.len(),
        passed: verdicts.iter().filter(|v| v.pass).count(),
        failed: verdicts.iter().filter(|v| !v.pass).count(),
        candidates: corpus.candidates,
        skipped: corpus.skipped.iter().map(|(r, n)| (r.as_str(), *n)).collect(),
        failures: BTreeMap::new(),
        flags: BTreeMap::new(),
        stopped_early,
    };
    for v in &verdicts {
        for (class, _) in &v.failures {
            *summary.failures.entry(class.clone()).or_default() += 1;
        }
        for (f, n) in &v.flags {
            *summary.flags.entry(*f).or_default() += n;
        }
    }
    Ok(RunOutcome { spec: spec.clone(), seed: opts.seed, verdicts, summary })
}

/// Writes the header line (with `timestamp`), one line per verdict, and the summary.
pub fn write_jsonl<W: Write>(out: &mut W, outcome: &RunOutcome, timestamp: u64) -> std::io::Result<()> {
    let header = json!({"type": "header", "seed": outcome.seed, "timestamp": timestamp, "spec": outcome.spec});
    writeln!(out, "{header}")?;
    for v in &outcome.verdicts {
        let mut line = serde_json::to_value(v).map_err(std::io::Error::other)?;
        line.as_object_mut().expect("verdicts serialize as objects").insert("type".into(), json!("verdict"));
        writeln!(out, "{line}")?;
    }
    let mut summary = serde_json::to_value(&outcome.summary).map_err(std::io::Error::other)?;
    summary.as_object_mut().expect("summary serializes as an object").insert("type".into(), json!("summary"));
    writeln!(out, "{summary}")
}
