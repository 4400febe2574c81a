//! Local root numbers, local Selmer-parity terms and the identities relating
//! them, for curves with a rational 2- or 3-isogeny.
//!
//! At a finite place `l` the Selmer term is read off from
//! `#coker/#ker = c(E')/c(E) * |α|^-1`, where `α = u'/u` compares the
//! scalings taking the isogeny-normalized models of `E` and `E'` to their
//! minimal models.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::arith::{is_prime, ord, prime_support, q};
use crate::curves::{ThreeIsogenyData, TwoIsogenyPair, WeierstrassModel};
use crate::error::{Error, Result};
use crate::localred::{c_ord, tate_algorithm, IsogenousCurves, Kodaira, LocalReduction, ReductionClass};
use crate::symbols::{artin_quadratic, hilbert, hilbert_int, Place, Sign};

/// Number of random primes outside the support checked per curve.
pub const SPOT_PRIMES: usize = 5;
const SPOT_PRIME_BOUND: u64 = 1000;

/// A curve together with the isogeny whose local terms are compared.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IsogenyContext {
    Two(TwoIsogenyPair),
    Three(ThreeIsogenyData),
}

impl IsogenyContext {
    pub fn p(&self) -> u64 {
        match self {
            IsogenyContext::Two(_) => 2,
            IsogenyContext::Three(_) => 3,
        }
    }

    pub fn source(&self) -> &WeierstrassModel {
        match self {
            IsogenyContext::Two(t) => t.source(),
            IsogenyContext::Three(t) => t.source(),
        }
    }

    pub fn target(&self) -> &WeierstrassModel {
        match self {
            IsogenyContext::Two(t) => t.target(),
            IsogenyContext::Three(t) => t.target(),
        }
    }

    /// Squarefree `d` with kernel field `Q(sqrt d)`; 1 for a 2-isogeny.
    pub fn kernel_class(&self) -> BigInt {
        match self {
            IsogenyContext::Two(_) => BigInt::one(),
            IsogenyContext::Three(t) => t.d_class.clone(),
        }
    }

    /// Primes where a local factor can be nontrivial: those dividing
    /// `2 p Δ(E) Δ(E')`.
    pub fn support(&self) -> Result<Vec<u64>> {
        let prod = self.source().discriminant() * self.target().discriminant() * q(2 * self.p() as i64);
        prime_support(&prod)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum WPath {
    Theorem,
    Table,
    Archimedean,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Flag {
    FormulaDefinedW,
    SinglePathSigma,
}

/// Local data at one finite prime for both curves.
#[derive(Clone, Debug)]
pub struct LocalData {
    pub l: u64,
    pub red: LocalReduction,
    pub red_prime: LocalReduction,
}

impl LocalData {
    pub fn compute(ctx: &IsogenyContext, l: u64) -> Result<Self> {
        Ok(LocalData {
            l,
            red: tate_algorithm(ctx.source(), l)?,
            red_prime: tate_algorithm(ctx.target(), l)?,
        })
    }
}


/// `μ3 ⊂ Q_l`.
fn has_cube_roots_of_unity(l: u64) -> bool {
    l % 3 == 1
}

/// The `δ` correction: `-1` only for `p = 3`, `μ3 ⊄ Q_l` and types IV, IV*.
pub fn delta_factor(p: u64, place: Place, kodaira: Option<Kodaira>) -> Sign {
    let bad_type = matches!(kodaira, Some(Kodaira::IV | Kodaira::IVStar));
    match place {
        Place::Finite(l) if p == 3 && bad_type && !has_cube_roots_of_unity(l) => Sign::Minus,
        _ => Sign::Plus,
    }
}

fn check_hypotheses(ctx: &IsogenyContext, data: &LocalData) -> Result<()> {
    let (l, class) = (data.l, data.red.class);
    match ctx.p() {
        2 if l == 2 && class == ReductionClass::GoodSupersingular => {
            Err(Error::HypothesisViolated("supersingular reduction at 2".into()))
        }
        2 if l == 2 && class == ReductionClass::Additive => {
            Err(Error::HypothesisViolated("additive reduction at 2".into()))
        }
        3 if l == 3 && class == ReductionClass::Additive => {
            Err(Error::HypothesisViolated("additive reduction at 3".into()))
        }
        _ => Ok(()),
    }
}

/// The `e`-based root number at an additive prime `l >= 5`.
fn root_number_closed_form(red: &LocalReduction) -> Result<Sign> {
    let l = red.l as i64;
    if let Kodaira::InStar(_) = red.kodaira {
        return hilbert_int(-1, l, Place::Finite(red.l));
    }
    let e = 12 / num_integer::gcd(12, red.v_delta_min);
    match e {
        1 => Ok(Sign::Plus),
        2 | 6 => hilbert_int(-1, l, Place::Finite(red.l)),
        3 => hilbert_int(-3, l, Place::Finite(red.l)),
        4 => hilbert_int(-2, l, Place::Finite(red.l)),
        _ => Err(Error::OutOfCases(format!("e = {e} at {l}"))),
    }
}

/// Root number with the path that produced it and any flags.
pub fn root_number_at(ctx: &IsogenyContext, data: &LocalData) -> Result<(Sign, WPath, Vec<Flag>)> {
    check_hypotheses(ctx, data)?;
    let red = &data.red;
    let w = match red.class {
        ReductionClass::GoodOrdinary | ReductionClass::GoodSupersingular => Sign::Plus,
        ReductionClass::MultiplicativeSplit => Sign::Minus,
        ReductionClass::MultiplicativeNonsplit => Sign::Plus,
        ReductionClass::Additive => return additive_root_number(ctx, red),
    };
    Ok((w, WPath::Theorem, Vec::new()))
}

fn additive_root_number(ctx: &IsogenyContext, red: &LocalReduction) -> Result<(Sign, WPath, Vec<Flag>)> {
    let l = red.l;
    let place = Place::Finite(l);
    match ctx {
        IsogenyContext::Two(_) => {
            let w = match red.kodaira {
                Kodaira::III | Kodaira::IIIStar => hilbert_int(-2, l as i64, place)?,
                Kodaira::I0Star | Kodaira::InStar(_) => hilbert_int(-1, l as i64, place)?,
                k => return Err(Error::OutOfCases(format!("type {k} at {l} for a 2-isogeny"))),
            };
            Ok((w, WPath::Table, Vec::new()))
        }
        IsogenyContext::Three(_) => {
            let theorem = delta_factor(3, place, Some(red.kodaira)) * artin_quadratic(&ctx.kernel_class(), place)?;
            if l == 2 {
                return Ok((theorem, WPath::Theorem, vec![Flag::FormulaDefinedW]));
            }
            let table = root_number_closed_form(red)?;
            if table != theorem {
                return Err(Error::PathDisagreement {
                    place: place.to_string(),
                    detail: format!("type {}: table {table}, theorem {theorem}", red.kodaira),
                });
            }
            Ok((table, WPath::Table, Vec::new()))
        }
    }
}

/// `w(E/Q_v)` and its path.
pub fn root_number(ctx: &IsogenyContext, place: Place) -> Result<(Sign, WPath)> {
    match place {
        Place::Real => Ok((Sign::Minus, WPath::Archimedean)),
        Place::Finite(l) => {
            let (w, path, _) = root_number_at(ctx, &LocalData::compute(ctx, l)?)?;
            Ok((w, path))
        }
    }
}

/// `v_l(α)` from the scalings to the minimal models.
pub fn alpha_from(data: &LocalData) -> i64 {
    ord(&data.red_prime.u, data.l) - ord(&data.red.u, data.l)
}

pub fn alpha_valuation(ctx: &IsogenyContext, l: u64) -> Result<i64> {
    Ok(alpha_from(&LocalData::compute(ctx, l)?))
}

pub fn c_ratio_ord(ctx: &IsogenyContext, data: &LocalData) -> i64 {
    c_ord(data.red_prime.tamagawa, ctx.p()) - c_ord(data.red.tamagawa, ctx.p())
}

/// Number of connected components of `y^2 = x(x^2 + a x + b)` over `R`.
fn real_components(a: &BigRational, b: &BigRational) -> u32 {
    let disc = a * a - q(4) * b;
    if disc.is_positive() {
        2
    } else {
        1
    }
}

/// `σ` at the real place from the kernel and cokernel of `φ` on real points.
pub fn sigma_real(ctx: &IsogenyContext) -> Sign {
    match ctx {
        IsogenyContext::Three(t) => Sign::from_bool(!t.d.is_positive()),
        IsogenyContext::Two(t) => {
            let comp_e = real_components(&t.a, &t.b);
            let comp_e_prime = real_components(&(q(-2) * &t.a), &t.delta);
            // (0, 0) lies on the identity component iff 0 is the largest root
            let zero_rightmost = t.delta.is_negative() || (t.a.is_positive() && t.b.is_positive());
            let hit = if comp_e == 2 && zero_rightmost { 2 } else { 1 };
            let coker = comp_e_prime / hit;
            Sign::from_bool(coker == 2)
        }
    }
}

pub fn sigma_from(ctx: &IsogenyContext, data: &LocalData) -> Sign {
    let alpha_part = if data.l == ctx.p() { alpha_from(data) } else { 0 };
    Sign::pow_minus_one(c_ratio_ord(ctx, data) + alpha_part)
}

/// `σ_φ(E/Q_v)` from Tamagawa numbers and `α` (finite places) or from real
/// components (the real place).
pub fn sigma_local(ctx: &IsogenyContext, place: Place) -> Result<Sign> {
    match place {
        Place::Real => Ok(sigma_real(ctx)),
        Place::Finite(l) => Ok(sigma_from(ctx, &LocalData::compute(ctx, l)?)),
    }
}

/// The case table for `σ_φ` with `p` odd.
pub fn sigma_theorem(
    place: Place,
    class: Option<ReductionClass>,
    artin: Sign,
    delta: Sign,
    p: u64,
) -> Result<Sign> {
    if p.is_multiple_of(2) {
        return Err(Error::OutOfCases("the σ table needs an odd isogeny degree".into()));
    }
    let l = match place {
        Place::Real => return Ok(-artin),
        Place::Finite(l) => l,
    };
    let class = class.ok_or_else(|| Error::MissingLocalData(format!("reduction class at {l}")))?;
    match class {
        ReductionClass::GoodOrdinary | ReductionClass::GoodSupersingular => Ok(artin),
        ReductionClass::MultiplicativeSplit => Ok(-artin),
        ReductionClass::MultiplicativeNonsplit => Ok(artin),
        ReductionClass::Additive if l != p => Ok(delta),
        ReductionClass::Additive => Err(Error::OutOfCases(format!("additive reduction at l = p = {p}"))),
    }
}

/// Everything computed at one place.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct LocalParityReport {
    pub place: Place,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kodaira: Option<Kodaira>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kodaira_prime: Option<Kodaira>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub class: Option<ReductionClass>,
    pub w: Sign,
    pub w_path: WPath,
    pub sigma: Sign,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sigma_theorem: Option<Sign>,
    pub c_ratio_ord: i64,
    pub alpha_val: i64,
    pub artin: Sign,
    pub delta_factor: Sign,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub hilbert_pair: Option<Sign>,
    pub identity_holds: bool,
    pub flags: BTreeSet<Flag>,
}

impl LocalParityReport {
    /// Whether both σ paths exist and agree (`None` when only one exists).
    pub fn sigma_paths_agree(&self) -> Option<bool> {
        self.sigma_theorem.map(|s| s == self.sigma)
    }
}

/// `(a, -b)_v (-2a, δ)_v`.
pub fn hilbert_pair(pair: &TwoIsogenyPair, place: Place) -> Result<Sign> {
    Ok(hilbert(&pair.a, &-&pair.b, place)? * hilbert(&(q(-2) * &pair.a), &pair.delta, place)?)
}

/// Computes every local term at `place` and checks the local identity.
pub fn check_identity(ctx: &IsogenyContext, place: Place) -> Result<LocalParityReport> {
    let data = match place {
        Place::Finite(l) => Some(LocalData::compute(ctx, l)?),
        Place::Real => None,
    };
    report_from(ctx, place, data.as_ref())
}

fn report_from(ctx: &IsogenyContext, place: Place, data: Option<&LocalData>) -> Result<LocalParityReport> {
    let p = ctx.p();
    let mut flags = BTreeSet::new();
    let (w, w_path, sigma, c_ratio, alpha_val) = match data {
        None => (Sign::Minus, WPath::Archimedean, sigma_real(ctx), 0, 0),
        Some(data) => {
            let (w, path, f) = root_number_at(ctx, data)?;
            flags.extend(f);
            (w, path, sigma_from(ctx, data), c_ratio_ord(ctx, data), alpha_from(data))
        }
    };
    let kodaira = data.map(|d| d.red.kodaira);
    let class = data.map(|d| d.red.class);
    let artin = artin_quadratic(&ctx.kernel_class(), place)?;
    let delta = delta_factor(p, place, kodaira);
    let (hilbert_pair_val, sigma_thm, identity_holds) = match ctx {
        IsogenyContext::Two(pair) => {
            let h = hilbert_pair(pair, place)?;
            (Some(h), None, w == sigma * h)
        }
        IsogenyContext::Three(_) => {
            let thm = match sigma_theorem(place, class, artin, delta, p) {
                Ok(s) => Some(s),
                Err(Error::OutOfCases(_)) => {
                    flags.insert(Flag::SinglePathSigma);
                    None
                }
                Err(e) => return Err(e),
            };
            let agree = thm.is_none_or(|t| t == sigma);
            (None, thm, w == artin * sigma && agree)
        }
    };
    Ok(LocalParityReport {
        place,
        kodaira,
        kodaira_prime: data.map(|d| d.red_prime.kodaira),
        class,
        w,
        w_path,
        sigma,
        sigma_theorem: sigma_thm,
        c_ratio_ord: c_ratio,
        alpha_val,
        artin,
        delta_factor: delta,
        hilbert_pair: hilbert_pair_val,
        identity_holds,
        flags,
    })
}

/// Products over all places and the checks built from them.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct GlobalReport {
    pub places: Vec<LocalParityReport>,
    pub w_global: Sign,
    pub s_global: Sign,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub corollary: Option<Sign>,
    pub artin_product: Sign,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub hilbert_product: Option<Sign>,
    pub spot_primes: Vec<u64>,
    pub violations: Vec<String>,
}

/// Random primes below a fixed bound outside `support`.
pub fn spot_primes(support: &[u64], rng: &mut ChaCha8Rng, count: usize) -> Vec<u64> {
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let l = rng.gen_range(5..SPOT_PRIME_BOUND);
        if is_prime(l) && !support.contains(&l) && !out.contains(&l) {
            out.push(l);
        }
    }
    out.sort_unstable();
    out
}

/// Builds the global report for `ctx`; violations are listed, not raised.
pub fn global_report(ctx: &IsogenyContext, seed: u64) -> Result<GlobalReport> {
    let support = ctx.support()?;
    let mut places = vec![check_identity(ctx, Place::Real)?];
    for &l in &support {
        places.push(check_identity(ctx, Place::Finite(l))?);
    }
    let mut violations = Vec::new();
    for r in &places {
        if !r.identity_holds {
            violations.push(format!("local identity at {}", r.place));
        }
    }
    let w_global: Sign = places.iter().map(|r| r.w).product();
    let s_global: Sign = places.iter().map(|r| r.sigma).product();
    if w_global != s_global {
        violations.push("global: W != S".into());
    }
    let artin_product: Sign = places.iter().map(|r| r.artin).product();
    if artin_product != Sign::Plus {
        violations.push("global: Artin product != 1".into());
    }
    let hilbert_product = match ctx {
        IsogenyContext::Two(_) => Some(places.iter().filter_map(|r| r.hilbert_pair).product::<Sign>()),
        IsogenyContext::Three(_) => None,
    };
    if hilbert_product == Some(Sign::Minus) {
        violations.push("global: Hilbert pair product != 1".into());
    }
    let corollary = match ctx {
        IsogenyContext::Three(_) => {
            let s = places.iter().filter(|r| r.class == Some(ReductionClass::MultiplicativeSplit)).count();
            let additive: Sign = places
                .iter()
                .filter(|r| r.class == Some(ReductionClass::Additive))
                .map(|r| r.delta_factor * r.artin)
                .product();
            let value = Sign::Minus * Sign::pow_minus_one(s as i64) * additive;
            if value != w_global {
                violations.push("global: closed formula != W".into());
            }
            Some(value)
        }
        IsogenyContext::Two(_) => None,
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let spot = spot_primes(&support, &mut rng, SPOT_PRIMES);
    for &l in &spot {
        let r = check_identity(ctx, Place::Finite(l))?;
        let trivial = r.w == Sign::Plus
            && r.sigma == Sign::Plus
            && r.artin == Sign::Plus
            && r.hilbert_pair.unwrap_or(Sign::Plus) == Sign::Plus;
        if !trivial {
            violations.push(format!("nontrivial factor at {l} outside the support"));
        }
    }
    Ok(GlobalReport {
        places,
        w_global,
        s_global,
        corollary,
        artin_product,
        hilbert_product,
        spot_primes: spot,
        violations,
    })
}

/// Like [`global_report`], but fails with the offending places.
pub fn global_check(ctx: &IsogenyContext, seed: u64) -> Result<GlobalReport> {
    let report = global_report(ctx, seed)?;
    if report.violations.is_empty() {
        Ok(report)
    } else {
        Err(Error::IdentityViolation(report.violations))
    }
}
