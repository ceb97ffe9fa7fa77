//! Turning splitting checks into certificates.
//!
//! Only positive conclusions are ever emitted. A failed search at finitely
//! many exponents, a missing hypothesis or an unusable prime all end in
//! `Inconclusive`, with the reason in `status`.

mod verify;

pub use verify::{verify_witness, WitnessRecord};

use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;

use crate::arithmodels::{geometric_sfr_check, reduce_mod_p, spread_out, suggest_primes, PerfectionLevel};
use crate::error::{Error, Result};
use crate::fcriteria::{
    check_witness, fpt_lower_bound, frobenius_colon, in_radical, is_nonzerodivisor, jacobian_minors, nu_value,
    search_witness, splitting_oracle, suggest_test_elements, OracleVerdict, Regularity, RingPresentation,
    SplittingWitness, TripleSpec,
};
use crate::frobenius::FrobeniusPower;
use crate::groebner::{set_budget, Ideal};
use crate::poly::{format_rational, CoefficientDomain, Polynomial};
use crate::testideals::tau_pair_divisor;

/// Schema tag of serialized certificates.
pub const SCHEMA: &str = "cert_v1";

/// Number of primes tried when none is given.
pub const PRIME_SUGGESTIONS: usize = 5;

/// Suggested test elements tried per exponent.
const MAX_TEST_ELEMENTS: usize = 4;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Conclusion {
    LogCanonical,
    Klt,
    StronglyFRegular,
    GeometricallyStronglyFRegular,
    DeformationConsistent,
    Inconclusive,
}

impl Conclusion {
    pub const ALL: [Conclusion; 6] = [
        Conclusion::LogCanonical,
        Conclusion::Klt,
        Conclusion::StronglyFRegular,
        Conclusion::GeometricallyStronglyFRegular,
        Conclusion::DeformationConsistent,
        Conclusion::Inconclusive,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Conclusion::LogCanonical => "log_canonical",
            Conclusion::Klt => "klt",
            Conclusion::StronglyFRegular => "strongly_F_regular",
            Conclusion::GeometricallyStronglyFRegular => "geometrically_strongly_F_regular",
            Conclusion::DeformationConsistent => "deformation_consistent",
            Conclusion::Inconclusive => "inconclusive",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Conclusion::ALL.into_iter().find(|c| c.as_str() == s)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Mode {
    Lc,
    Klt,
    Sfr,
    Gsfr,
    Deform,
    Fpt,
    Tau,
}

impl Mode {
    pub const ALL: [Mode; 7] = [Mode::Lc, Mode::Klt, Mode::Sfr, Mode::Gsfr, Mode::Deform, Mode::Fpt, Mode::Tau];

    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Lc => "lc",
            Mode::Klt => "klt",
            Mode::Sfr => "sfr",
            Mode::Gsfr => "gsfr",
            Mode::Deform => "deform",
            Mode::Fpt => "fpt",
            Mode::Tau => "tau",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Mode::ALL.into_iter().find(|m| m.as_str() == s)
    }
}

/// Why a certificate ended the way it did.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Status {
    Certified,
    /// No splitting found up to `e_max` at any usable prime.
    SplittingNotFound,
    /// A splitting was found but a theorem hypothesis is neither
    /// machine-checked nor asserted.
    HypothesisNotEstablished,
    /// Every candidate prime was excluded, degenerate or divides an index.
    NoUsablePrime,
    /// The section certifies but the total ring provably is not F-pure.
    TheoremViolationCandidate,
    /// The emitted witness failed re-verification.
    WitnessRejected,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Certified => "certified",
            Status::SplittingNotFound => "splitting_not_found",
            Status::HypothesisNotEstablished => "hypothesis_not_established",
            Status::NoUsablePrime => "no_usable_prime",
            Status::TheoremViolationCandidate => "theorem_violation_candidate",
            Status::WitnessRejected => "witness_rejected",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PrimeStatus {
    Success,
    NotCertified,
    /// `p` divides the denominator of `λ` or of a divisor coefficient.
    IndexDivisibleByP,
    Excluded,
    Degenerate,
}

impl PrimeStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            PrimeStatus::Success => "success",
            PrimeStatus::NotCertified => "not_certified",
            PrimeStatus::IndexDivisibleByP => "index_divisible_by_p",
            PrimeStatus::Excluded => "excluded",
            PrimeStatus::Degenerate => "degenerate",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PrimeAttempt {
    pub p: u64,
    pub status: PrimeStatus,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    pub mode: Mode,
    pub conclusion: Conclusion,
    pub status: Status,
    pub theorem_tag: String,
    pub prime: Option<u64>,
    pub exponent_witness: Option<u32>,
    /// The monomial of `c d h` outside `m^[q]`.
    pub witness_element: Option<String>,
    /// Hypotheses that were not machine-checked.
    pub assumptions: Vec<String>,
    pub checked_hypotheses: Vec<String>,
    pub primes_tried: Vec<PrimeAttempt>,
    pub witnesses: Vec<WitnessRecord>,
}

/// A certification or computation request.
#[derive(Clone, Debug)]
pub struct JobSpec {
    pub input: TripleSpec,
    pub mode: Mode,
    /// Use only this prime; otherwise the first success among the suggested
    /// primes.
    pub prime: Option<u64>,
    pub e_max: u32,
    pub gb_budget: Option<u64>,
    pub assert_q_gorenstein: bool,
    /// In the variables and coefficients of the input ring.
    pub test_element: Option<Polynomial>,
    /// `h` with `S = R/(h)` for the deformation check.
    pub section: Option<Polynomial>,
    pub section_test_element: Option<Polynomial>,
    /// Perfection level for the geometric check.
    pub level: u32,
    pub excluded_primes: Vec<u64>,
}

impl JobSpec {
    pub fn new(input: TripleSpec, mode: Mode) -> Self {
        JobSpec {
            input,
            mode,
            prime: None,
            e_max: 2,
            gb_budget: None,
            assert_q_gorenstein: false,
            test_element: None,
            section: None,
            section_test_element: None,
            level: 0,
            excluded_primes: Vec::new(),
        }
    }
}

/// `ν(e)/p^e` for `e = 1..e_max`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FptReport {
    pub prime: u64,
    pub polynomial: String,
    /// `(e, ν(e), ν(e)/p^e)`.
    pub bounds: Vec<(u32, u64, BigRational)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TauReport {
    pub prime: u64,
    pub generators: Vec<String>,
    pub truncation_level: u32,
    pub stabilized: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum JobOutcome {
    Certificate(Certificate),
    Fpt(FptReport),
    Tau(TauReport),
}

/// Dispatches on the job's mode.
pub fn run_job(job: &JobSpec) -> Result<JobOutcome> {
    if let Some(b) = job.gb_budget {
        set_budget(b);
    }
    match job.mode {
        Mode::Lc => certify_log_canonical(job).map(JobOutcome::Certificate),
        Mode::Klt | Mode::Sfr => certify_klt(job).map(JobOutcome::Certificate),
        Mode::Gsfr => certify_geometric(job).map(JobOutcome::Certificate),
        Mode::Deform => {
            let h = job.section.as_ref().ok_or_else(|| Error::Invalid("deform mode needs a section h".into()))?;
            if job.input.ring.characteristic() == 0 {
                return Err(Error::WrongCharacteristic);
            }
            verify_deformation_sfr(
                &job.input.ring,
                h,
                job.test_element.as_ref(),
                job.section_test_element.as_ref(),
                job.e_max,
            )
            .map(JobOutcome::Certificate)
        }
        Mode::Fpt => fpt_job(job).map(JobOutcome::Fpt),
        Mode::Tau => tau_job(job).map(JobOutcome::Tau),
    }
}

// ------------------------------------------------------------------------
// prime handling

fn index_divisible(spec: &TripleSpec, p: u64) -> bool {
    let pb = BigInt::from(p);
    spec.delta
        .denominators()
        .iter()
        .chain(core::iter::once(spec.lambda.denom()))
        .any(|d| d.is_multiple_of(&pb))
}

/// Fibers to examine: the input itself in characteristic `p`, the requested
/// or suggested reductions of a Q-input otherwise.
fn candidate_primes(job: &JobSpec) -> Result<(Option<crate::arithmodels::ArithmeticModel>, Vec<u64>)> {
    let p = job.input.ring.characteristic();
    if p != 0 {
        if let Some(q) = job.prime {
            if q != p {
                return Err(Error::WrongCharacteristic);
            }
        }
        return Ok((None, vec![p]));
    }
    let model = spread_out(&job.input, &job.excluded_primes)?;
    let primes = match job.prime {
        Some(q) => vec![q],
        None => suggest_primes(&model, PRIME_SUGGESTIONS),
    };
    Ok((Some(model), primes))
}

fn fiber_at(model: &Option<crate::arithmodels::ArithmeticModel>, job: &JobSpec, p: u64) -> Result<Option<TripleSpec>> {
    if index_divisible(&job.input, p) {
        return Ok(None);
    }
    match model {
        None => Ok(Some(job.input.clone())),
        Some(m) => reduce_mod_p(m, p).map(Some),
    }
}

fn reduce_element(f: &Polynomial, target: CoefficientDomain) -> Result<Polynomial> {
    if f.domain() == target {
        Ok(f.clone())
    } else {
        f.reduce_mod(target)
    }
}

// ------------------------------------------------------------------------
// searches

struct TestElements {
    list: Vec<Polynomial>,
    checked: Option<String>,
    assumed: Option<String>,
}

fn test_elements(ring: &RingPresentation, given: Option<&Polynomial>, jacobian_trusted: bool) -> Result<TestElements> {
    let domain = ring.domain();
    let mut te = TestElements { list: Vec::new(), checked: None, assumed: None };
    if let Some(c) = given {
        let c = reduce_element(c, domain)?;
        if c.is_zero() || ring.relations().contains(&c)? {
            return Err(Error::Invalid("test element vanishes in the ring".into()));
        }
        let valid = jacobian_trusted && {
            let mut j = ring.relations().generators().to_vec();
            j.extend(jacobian_minors(ring)?);
            let jac = Ideal::new(domain, ring.nvars(), j);
            in_radical(&c, &jac)? && is_nonzerodivisor(ring, &c)?
        };
        let text = alloc::format!("test element {}: R_c is regular", ring.format(&c));
        if valid {
            te.checked = Some(alloc::format!("{} (Jacobian criterion)", text));
        } else {
            te.assumed = Some(alloc::format!("{} (user-supplied)", text));
        }
        te.list.push(c);
        return Ok(te);
    }
    te.list = suggest_test_elements(ring)?;
    te.list.truncate(MAX_TEST_ELEMENTS);
    let text = "test elements lie in the radical of the Jacobian ideal and are nonzerodivisors";
    if jacobian_trusted {
        te.checked = Some(text.to_string());
    } else {
        te.assumed = Some(alloc::format!("{}; R_c regular over the imperfect base field is assumed", text));
    }
    Ok(te)
}

fn fpure_search(spec: &TripleSpec, e_max: u32) -> Result<Option<SplittingWitness>> {
    let one = Polynomial::one(spec.ring.domain(), spec.ring.nvars());
    regularity_search(spec, &[one], e_max)
}

fn regularity_search(spec: &TripleSpec, cs: &[Polynomial], e_max: u32) -> Result<Option<SplittingWitness>> {
    let p = spec.ring.characteristic();
    for e in 1..=e_max {
        let q = FrobeniusPower::new(p, e)?;
        let colon = frobenius_colon(&spec.ring, q)?;
        for c in cs {
            if let Some(w) = search_witness(spec, q, c, &colon)? {
                return Ok(Some(w));
            }
        }
    }
    Ok(None)
}

/// Textual form of a witness over the reduced triple.
pub fn witness_record(spec: &TripleSpec, w: &SplittingWitness, role: &str) -> WitnessRecord {
    let ring = &spec.ring;
    let names = ring.variables();
    let fmt = |f: &Polynomial| ring.format(f);
    let mono = Polynomial::term(ring.domain(), w.monomial.clone(), ring.domain().one());
    WitnessRecord {
        role: role.to_string(),
        variables: names.to_vec(),
        base_variables: ring.base_variables().iter().map(|&b| names[b].clone()).collect(),
        p: ring.characteristic(),
        relations: ring.relations().generators().iter().map(fmt).collect(),
        delta: spec.delta.support().map(|c| (fmt(&c.g), format_rational(&c.c))).collect(),
        a: if spec.a_is_unit() { Vec::new() } else { spec.a.generators().iter().map(fmt).collect() },
        lambda: format_rational(&spec.lambda),
        e: w.q.e(),
        test_element: fmt(&w.test_element),
        a_exponents: w.a_exponents.clone(),
        colon_element: fmt(&w.colon_element),
        monomial: fmt(&mono),
        coefficient: w.coefficient.as_residue().map(u64::from).unwrap_or(0),
    }
}

// ------------------------------------------------------------------------
// certificate assembly

struct Draft {
    mode: Mode,
    conclusion: Conclusion,
    tag: &'static str,
    prime: Option<u64>,
    assumptions: Vec<String>,
    checked: Vec<String>,
    attempts: Vec<PrimeAttempt>,
    witnesses: Vec<(TripleSpec, SplittingWitness, &'static str)>,
    missing: bool,
}

impl Draft {
    fn new(mode: Mode, conclusion: Conclusion, tag: &'static str) -> Self {
        Draft {
            mode,
            conclusion,
            tag,
            prime: None,
            assumptions: Vec::new(),
            checked: Vec::new(),
            attempts: Vec::new(),
            witnesses: Vec::new(),
            missing: false,
        }
    }

    fn hypothesis(&mut self, checked: Option<String>, asserted: Option<String>) {
        match (checked, asserted) {
            (Some(c), _) => self.checked.push(c),
            (None, Some(a)) => self.assumptions.push(a),
            (None, None) => self.missing = true,
        }
    }

    /// Applies the soundness gate and fixes the final status.
    fn finish(self, fallback: Status) -> Certificate {
        let records: Vec<WitnessRecord> =
            self.witnesses.iter().map(|(s, w, role)| witness_record(s, w, role)).collect();
        let headline = records.first();
        let mut cert = Certificate {
            mode: self.mode,
            conclusion: Conclusion::Inconclusive,
            status: fallback,
            theorem_tag: self.tag.to_string(),
            prime: self.prime,
            exponent_witness: headline.map(|r| r.e),
            witness_element: headline.map(|r| r.monomial.clone()),
            assumptions: self.assumptions,
            checked_hypotheses: self.checked,
            primes_tried: self.attempts,
            witnesses: records,
        };
        if fallback != Status::Certified {
            return cert;
        }
        if self.missing {
            cert.status = Status::HypothesisNotEstablished;
            return cert;
        }
        let sound = self.witnesses.iter().all(|(s, w, _)| check_witness(s, w).unwrap_or(false))
            && cert.witnesses.iter().all(|r| verify_witness(r).is_ok());
        if sound {
            cert.conclusion = self.conclusion;
        } else {
            cert.status = Status::WitnessRejected;
        }
        cert
    }
}

const MODEL_ASSUMPTION: &str = "the spread-out model is flat over Z_(p) and its fiber is normal at the point";

fn gorenstein_check(ring: &RingPresentation) -> Result<bool> {
    ring.is_complete_intersection()
}

/// Prime loop shared by the lc and klt paths.
fn over_primes<F>(job: &JobSpec, draft: &mut Draft, mut check: F) -> Result<Status>
where
    F: FnMut(&TripleSpec, &mut Draft) -> Result<Option<SplittingWitness>>,
{
    let (model, primes) = candidate_primes(job)?;
    let mut any_usable = false;
    for p in primes {
        let fiber = match fiber_at(&model, job, p) {
            Ok(Some(f)) => f,
            Ok(None) => {
                draft.attempts.push(PrimeAttempt { p, status: PrimeStatus::IndexDivisibleByP });
                continue;
            }
            Err(Error::ExcludedPrime(_)) => {
                draft.attempts.push(PrimeAttempt { p, status: PrimeStatus::Excluded });
                continue;
            }
            Err(Error::Degenerate(..)) => {
                draft.attempts.push(PrimeAttempt { p, status: PrimeStatus::Degenerate });
                continue;
            }
            Err(e) => return Err(e),
        };
        any_usable = true;
        match check(&fiber, draft)? {
            Some(w) => {
                draft.attempts.push(PrimeAttempt { p, status: PrimeStatus::Success });
                draft.prime = Some(p);
                draft.witnesses.push((fiber, w, "ring"));
                return Ok(Status::Certified);
            }
            None => draft.attempts.push(PrimeAttempt { p, status: PrimeStatus::NotCertified }),
        }
    }
    Ok(if any_usable { Status::SplittingNotFound } else { Status::NoUsablePrime })
}

/// Log canonicity of a Q-triple from sharp F-purity of one reduction.
pub fn certify_log_canonical(job: &JobSpec) -> Result<Certificate> {
    if job.input.ring.characteristic() != 0 {
        return Err(Error::Invalid("lc mode requires input over Q".into()));
    }
    let mut draft = Draft::new(Mode::Lc, Conclusion::LogCanonical, "sharp-F-purity-of-a-fiber-implies-lc");
    let ci = gorenstein_check(&job.input.ring)?;
    draft.hypothesis(
        ci.then(|| "K_X + Delta is Q-Cartier: complete intersection with Delta a combination of principal divisors".to_string()),
        job.assert_q_gorenstein.then(|| "K_X + Delta is Q-Cartier at the point (asserted)".to_string()),
    );
    draft.assumptions.push(MODEL_ASSUMPTION.to_string());
    let e_max = job.e_max;
    let status = over_primes(job, &mut draft, |fiber, _| fpure_search(fiber, e_max))?;
    Ok(draft.finish(status))
}

/// klt for Q-inputs, strong F-regularity for F_p-inputs.
pub fn certify_klt(job: &JobSpec) -> Result<Certificate> {
    let rational = job.input.ring.characteristic() == 0;
    if job.mode == Mode::Klt && !rational && !job.input.ring.base_variables().is_empty() {
        return Err(Error::Invalid("base variables are only supported in gsfr and tau modes".into()));
    }
    let mut draft = if rational && job.mode == Mode::Klt {
        Draft::new(Mode::Klt, Conclusion::Klt, "sfr-of-a-fiber-implies-klt")
    } else {
        Draft::new(job.mode, Conclusion::StronglyFRegular, "sfr-fedder-glassbrenner")
    };
    if rational && job.mode == Mode::Klt {
        let ring = &job.input.ring;
        let low_dim = ring.dimension()? <= 2;
        let ci = gorenstein_check(ring)?;
        let checked = if low_dim {
            Some("the point has dimension at most 2".to_string())
        } else if ci {
            Some("log Q-Gorenstein: complete intersection with Delta a combination of principal divisors".to_string())
        } else {
            None
        };
        draft.hypothesis(
            checked,
            job.assert_q_gorenstein
                .then(|| "K + Delta is Q-Cartier on the fiber and the generic fiber (asserted)".to_string()),
        );
        draft.assumptions.push("the spread-out model is flat over Z_(p)".to_string());
    }
    let e_max = job.e_max;
    let given = job.test_element.clone();
    let mut recorded = false;
    let status = over_primes(job, &mut draft, |fiber, d| {
        let te = test_elements(&fiber.ring, given.as_ref(), true)?;
        let found = regularity_search(fiber, &te.list, e_max)?;
        if found.is_some() && !recorded {
            recorded = true;
            if !fiber.ring.is_regular() && !fiber.ring.is_complete_intersection()? {
                d.assumptions.push("the fiber is equidimensional (Jacobian criterion)".to_string());
            }
            d.hypothesis(te.checked, te.assumed);
        }
        Ok(found)
    })?;
    Ok(draft.finish(status))
}

/// Geometric strong F-regularity through the base change to `k^{1/p^n}`.
pub fn certify_geometric(job: &JobSpec) -> Result<Certificate> {
    let spec = &job.input;
    let p = spec.ring.characteristic();
    if p == 0 {
        return Err(Error::WrongCharacteristic);
    }
    let mut draft = Draft::new(Mode::Gsfr, Conclusion::GeometricallyStronglyFRegular, "sfr-after-perfection-base-change");
    draft.prime = Some(p);
    if index_divisible(spec, p) {
        draft.attempts.push(PrimeAttempt { p, status: PrimeStatus::IndexDivisibleByP });
        return Ok(draft.finish(Status::NoUsablePrime));
    }
    let level = PerfectionLevel { n: job.level };
    let ext = crate::arithmodels::perfection_base_change(spec, level)?;
    let trusted = spec.ring.base_variables().is_empty();
    let te = test_elements(&spec.ring, job.test_element.as_ref(), trusted)?;
    for c in &te.list {
        let res = geometric_sfr_check(spec, level, c, job.e_max)?;
        if let Regularity::Certified(w) = res.result {
            draft.attempts.push(PrimeAttempt { p, status: PrimeStatus::Success });
            draft.hypothesis(te.checked, te.assumed);
            draft.checked.push(alloc::format!("computed over k^(1/p^{})", job.level));
            draft.witnesses.push((ext, w, "ring"));
            return Ok(draft.finish(Status::Certified));
        }
    }
    draft.attempts.push(PrimeAttempt { p, status: PrimeStatus::NotCertified });
    Ok(draft.finish(Status::SplittingNotFound))
}

/// Certifies `S = R/(h)` and `R` strongly F-regular independently.
pub fn verify_deformation_sfr(
    ring: &RingPresentation,
    h: &Polynomial,
    c_r: Option<&Polynomial>,
    c_s: Option<&Polynomial>,
    e_max: u32,
) -> Result<Certificate> {
    let p = ring.characteristic();
    if p == 0 {
        return Err(Error::WrongCharacteristic);
    }
    if !ring.base_variables().is_empty() {
        return Err(Error::Invalid("base variables are not supported in deform mode".into()));
    }
    if h.is_zero() || ring.relations().contains(h)? {
        return Err(Error::Invalid("h must be nonzero in R".into()));
    }
    let section = ring.quotient(core::slice::from_ref(h))?;
    let mut draft = Draft::new(Mode::Deform, Conclusion::DeformationConsistent, "sfr-deforms-from-a-section");
    draft.prime = Some(p);
    draft.assumptions.push(alloc::format!("S = R/({}) is normal (asserted)", ring.format(h)));

    let s_spec = TripleSpec::ring_only(section.clone());
    let s_te = test_elements(&section, c_s, true)?;
    let s_w = regularity_search(&s_spec, &s_te.list, e_max)?;
    let r_spec = TripleSpec::ring_only(ring.clone());
    let r_te = test_elements(ring, c_r, true)?;
    let r_w = regularity_search(&r_spec, &r_te.list, e_max)?;

    let status = match (&r_w, &s_w) {
        (Some(_), Some(_)) => Status::Certified,
        (_, None) => Status::HypothesisNotEstablished,
        (None, Some(_)) => match splitting_oracle(&r_spec, 1, None) {
            Ok(OracleVerdict::Fails) => Status::TheoremViolationCandidate,
            _ => Status::SplittingNotFound,
        },
    };
    draft.attempts.push(PrimeAttempt {
        p,
        status: if status == Status::Certified { PrimeStatus::Success } else { PrimeStatus::NotCertified },
    });
    if let Some(w) = r_w {
        draft.hypothesis(r_te.checked, r_te.assumed);
        draft.witnesses.push((r_spec, w, "total"));
    }
    if let Some(w) = s_w {
        draft.hypothesis(s_te.checked, s_te.assumed);
        draft.witnesses.push((s_spec, w, "section"));
    }
    Ok(draft.finish(status))
}

// ------------------------------------------------------------------------
// computations

fn first_fiber(job: &JobSpec) -> Result<(u64, TripleSpec)> {
    let (model, primes) = candidate_primes(job)?;
    for p in primes {
        match fiber_at(&model, job, p) {
            Ok(Some(f)) => return Ok((p, f)),
            Ok(None) | Err(Error::ExcludedPrime(_)) | Err(Error::Degenerate(..)) => continue,
            Err(e) => return Err(e),
        }
    }
    Err(Error::Invalid("no usable prime".into()))
}

/// F-pure threshold lower bounds of the single divisor component.
pub fn fpt_job(job: &JobSpec) -> Result<FptReport> {
    let comps: Vec<_> = job.input.delta.support().collect();
    if comps.len() != 1 {
        return Err(Error::Invalid("fpt mode needs exactly one divisor component g".into()));
    }
    // the coefficient of the component plays no role here
    let mut probe = job.clone();
    probe.input.delta = crate::fcriteria::DivisorData::single(comps[0].g.clone(), BigRational::from_integer(1.into()));
    let (p, fiber) = first_fiber(&probe)?;
    if !fiber.ring.is_regular() {
        return Err(Error::NonRegularAmbient);
    }
    let f = fiber.delta.support().next().map(|c| c.g.clone()).ok_or(Error::Unit)?;
    let point = fiber.ring.point_variables();
    let mut bounds = Vec::new();
    for e in 1..=job.e_max {
        let nu = nu_value(&f, e, &point)?;
        bounds.push((e, nu, fpt_lower_bound(&f, e, &point)?));
    }
    Ok(FptReport { prime: p, polynomial: fiber.ring.format(&f), bounds })
}

/// `τ(R, Δ, a^λ)` of a regular ring, truncated at `e_max` summands.
pub fn tau_job(job: &JobSpec) -> Result<TauReport> {
    let (p, fiber) = first_fiber(job)?;
    let res = tau_pair_divisor(&fiber.ring, &fiber.delta, &fiber.a, &fiber.lambda, job.e_max)?;
    let ideal = res.ideal.minimized()?;
    Ok(TauReport {
        prime: p,
        generators: ideal.generators().iter().map(|g| fiber.ring.format(g)).collect(),
        truncation_level: res.truncation_level,
        stabilized: res.stabilized,
    })
}
