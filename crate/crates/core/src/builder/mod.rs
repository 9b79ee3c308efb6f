//! Step-by-step construction of a vector whose best approximations
//! `w_0, w_1, ...` have normalized cylinder volumes `q_{n+1} R_{n+1}^2`
//! inside prescribed target intervals. Every step is verified exactly on
//! the rational approximation `v_n = p_n / q_n`.

mod charts;
mod strips;
mod sweep;

pub use charts::{
    b2_contains, b2_point_inside, cylinder_of, epsilon_search, family_r, reparam, Chart, ChartParams, FamilyConstraint,
    ParamPoint,
};
pub use strips::{admissible_k_search, initial_k_min, parabola_gap, StripHit};
pub use sweep::{window_candidates, CLattice, Candidate, Window, WindowStream};

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::approx2d::{self, cylinder_int_empty, two_over_sqrt3, BoundaryPoint, PointClass};
use crate::exact::{certified_compare, CertifiedOrdering, Rational, RealExpr, Surd};
use crate::lattice3::{build_frame, dot, gcd3, neg, plane_through, IVec3};
use crate::{Error, Result};

/// Closed target interval `[lo, hi]` inside `[0, 2/sqrt(3)]`; volumes must
/// fall in its interior.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TargetInterval {
    pub lo: Surd,
    pub hi: Surd,
}

fn surd_cmp(a: &Surd, b: &Surd) -> Result<Ordering> {
    if let Some(o) = a.cmp_exact(b) {
        return Ok(o);
    }
    certified_compare(&RealExpr::from_surd(a), &RealExpr::from_surd(b), approx2d::MAX_PRECISION)
        .decided()
        .ok_or(Error::PrecisionExhausted(approx2d::MAX_PRECISION))
}

impl TargetInterval {
    pub fn new(lo: Surd, hi: Surd) -> Result<Self> {
        let zero = Surd::rational(Rational::zero());
        if surd_cmp(&lo, &zero)? == Ordering::Less {
            return Err(Error::InvalidInput(format!("target lower end {lo} is negative")));
        }
        if surd_cmp(&lo, &hi)? != Ordering::Less {
            return Err(Error::InvalidInput(format!("target [{lo}, {hi}] has empty interior")));
        }
        if surd_cmp(&hi, &two_over_sqrt3())? == Ordering::Greater {
            return Err(Error::InvalidInput(format!("target upper end {hi} exceeds 2/sqrt(3)")));
        }
        Ok(TargetInterval { lo, hi })
    }

    pub fn rational(lo: Rational, hi: Rational) -> Result<Self> {
        Self::new(Surd::rational(lo), Surd::rational(hi))
    }

    /// `[lambda - halfwidth, lambda + halfwidth]` clipped to `[0, 2/sqrt(3)]`.
    pub fn around(lambda: &Surd, halfwidth: &Rational) -> Result<Self> {
        let hw = Surd::rational(halfwidth.clone());
        let mut lo = lambda.sub(&hw).expect("rational shift");
        let mut hi = lambda.add(&hw).expect("rational shift");
        let zero = Surd::rational(Rational::zero());
        if surd_cmp(&lo, &zero)? == Ordering::Less {
            lo = zero;
        }
        if surd_cmp(&hi, &two_over_sqrt3())? == Ordering::Greater {
            hi = two_over_sqrt3();
        }
        Self::new(lo, hi)
    }

    /// Whether `lo < x < hi`.
    pub fn contains_open(&self, x: &Rational) -> bool {
        let s = Surd::rational(x.clone());
        self.lo.cmp_exact(&s) == Some(Ordering::Less) && s.cmp_exact(&self.hi) == Some(Ordering::Less)
    }

    /// Rational `(lo_down, hi_up)` with `lo_down <= lo` and `hi_up >= hi`.
    pub fn outer_bounds(&self) -> (Rational, Rational) {
        (self.lo.bounds(64).0, self.hi.bounds(64).1)
    }

    pub fn midpoint(&self) -> Rational {
        let (a, _) = self.lo.bounds(64);
        let (_, b) = self.hi.bounds(64);
        (a + b) / Rational::from_integer(2.into())
    }

    pub fn width(&self) -> Rational {
        self.hi.bounds(64).0 - self.lo.bounds(64).1
    }
}

impl fmt::Display for TargetInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", RealExpr::from_surd(&self.lo), RealExpr::from_surd(&self.hi))
    }
}

/// The exact data behind one accepted step.
#[derive(Debug, Clone)]
pub struct StepCertificate {
    pub n: usize,
    pub w: IVec3,
    pub branch: bool,
    /// `n . w_n` for the canonical normal of the plane through `w_{n-1}`.
    pub side: BigInt,
    /// `(R_n^nu)^2` for nu = 0..=n.
    pub r2: Vec<Rational>,
    /// `q_nu (R_n^nu)^2` for nu = 0..=n.
    pub v_over_pi: Vec<Rational>,
    /// `|v_n - v_{n-1}|^2` and its bound `4^-n / 4`.
    pub step2: Rational,
    pub step2_bound: Rational,
    /// Bound t in `|R_n^nu - R_{n-1}^nu| < t`.
    pub drift_bound: Rational,
    /// Boundary lattice points of each cylinder `Pi_n^nu`.
    pub boundary: Vec<Vec<BoundaryPoint>>,
    /// Candidates examined before this one was accepted, and rejections
    /// per property (index 0 is property 1).
    pub tested: usize,
    pub rejected: [usize; 6],
}

#[derive(Debug, Clone)]
pub struct ConstructionState {
    /// `w_0, ..., w_n`.
    pub records: Vec<IVec3>,
    /// Targets for steps 1..=n.
    pub targets: Vec<TargetInterval>,
    /// `(R_n^nu)^2` for nu = 0..=n.
    pub r2: Vec<Rational>,
    /// `V_n^nu / pi` for nu = 0..=n.
    pub v_over_pi: Vec<Rational>,
    pub branches: Vec<bool>,
    pub certificates: Vec<StepCertificate>,
}

impl Default for ConstructionState {
    fn default() -> Self {
        Self::initial()
    }
}

impl ConstructionState {
    /// `w_0 = (1, 0, 0)`.
    pub fn initial() -> Self {
        ConstructionState {
            records: vec![[BigInt::one(), BigInt::zero(), BigInt::zero()]],
            targets: Vec::new(),
            r2: vec![Rational::one()],
            v_over_pi: vec![Rational::one()],
            branches: Vec::new(),
            certificates: Vec::new(),
        }
    }

    pub fn n(&self) -> usize {
        self.records.len() - 1
    }

    pub fn last(&self) -> &IVec3 {
        self.records.last().unwrap()
    }

    /// `v_n = p_n / q_n`.
    pub fn v(&self) -> [Rational; 2] {
        let w = self.last();
        [Rational::new(w[1].clone(), w[0].clone()), Rational::new(w[2].clone(), w[0].clone())]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Strategy {
    /// Sweep all lattice points by increasing denominator.
    #[default]
    Sweep,
    /// Search the strips of the fixed-volume family in the neighbor plane.
    Strips,
}

#[derive(Debug, Clone)]
pub struct BuildOptions {
    pub strategy: Strategy,
    /// Abort a step once the denominator would pass this cap.
    pub q_cap: Option<BigInt>,
    /// Sweep windows (or strips per retry) to try per step.
    pub budget: usize,
    /// Candidates tested per search before giving up on the current prefix.
    pub test_budget: usize,
    /// How often `construct` may revise an earlier step after a failed one.
    pub max_backtracks: usize,
}

impl Default for BuildOptions {
    fn default() -> Self {
        BuildOptions { strategy: Strategy::Sweep, q_cap: None, budget: 40, test_budget: 3000, max_backtracks: 64 }
    }
}

fn pow4(n: usize) -> Rational {
    Rational::from_integer(BigInt::one() << (2 * n))
}

fn sub(a: &IVec3, b: &IVec3) -> IVec3 {
    crate::lattice3::add(a, &neg(b))
}

/// `(R_n^nu)^2` of candidate u against record `w_{nu-1}`.
fn r2_against(prev: &IVec3, u: &IVec3) -> Rational {
    let (x, q) = (&u[0], &prev[0]);
    let a = q * &u[1] - x * &prev[1];
    let b = q * &u[2] - x * &prev[2];
    Rational::new(&a * &a + &b * &b, x * x)
}

enum Outcome {
    Reject(usize),
    Accept(Box<StepCertificate>),
}

/// Exact check of the six step properties for candidate u as `w_n`.
fn check_candidate(state: &ConstructionState, delta: &TargetInterval, u: &IVec3) -> Outcome {
    let n = state.n() + 1;
    let recs = &state.records;
    let x = &u[0];
    // property 2
    if x <= &recs[n - 1][0] {
        return Outcome::Reject(1);
    }
    if !gcd3(u).is_one() {
        return Outcome::Reject(0);
    }
    let targets = |nu: usize| if nu == n { delta } else { &state.targets[nu - 1] };
    let qn = |nu: usize| if nu == n { x.clone() } else { recs[nu][0].clone() };
    let r2n = r2_against(&recs[n - 1], u);
    // property 4 at nu = n
    let vn = Rational::from_integer(x.clone()) * &r2n;
    if !delta.contains_open(&vn) {
        return Outcome::Reject(3);
    }
    let mut r2 = Vec::with_capacity(n + 1);
    r2.push(Rational::one());
    for nu in 1..=n {
        r2.push(if nu == n { r2n.clone() } else { r2_against(&recs[nu - 1], u) });
    }
    // property 3
    let quarter = Rational::new(BigInt::one(), BigInt::from(4));
    for nu in 1..=n {
        if r2[nu] >= &quarter * &r2[nu - 1] {
            return Outcome::Reject(2);
        }
    }
    // property 5
    let v = [Rational::new(u[1].clone(), x.clone()), Rational::new(u[2].clone(), x.clone())];
    let vp = state.v();
    let step2 = (&v[0] - &vp[0]) * (&v[0] - &vp[0]) + (&v[1] - &vp[1]) * (&v[1] - &vp[1]);
    let step2_bound = Rational::one() / (pow4(n) * Rational::from_integer(4.into()));
    if step2 >= step2_bound {
        return Outcome::Reject(4);
    }
    // property 6: |sqrt(A) - sqrt(B)| < t
    let t = Rational::new(BigInt::one(), BigInt::one() << (n + 1));
    let t2 = &t * &t;
    for nu in 1..n {
        let (a, b) = (&r2[nu], &state.r2[nu]);
        let s = a + b - &t2;
        if !(s.is_negative() || &s * &s < Rational::from_integer(4.into()) * a * b) {
            return Outcome::Reject(5);
        }
    }
    // property 4 for earlier targets
    let mut vop = Vec::with_capacity(n + 1);
    for (nu, r) in r2.iter().enumerate() {
        let val = Rational::from_integer(qn(nu)) * r;
        if nu >= 1 && nu < n && !targets(nu).contains_open(&val) {
            return Outcome::Reject(3);
        }
        vop.push(val);
    }
    // property 1: empty interiors; the lateral surface may only carry
    // w_{nu-1} and its mirror image w_n - w_{nu-1}
    let mut boundary = vec![Vec::new(); n + 1];
    for nu in (0..=n).rev() {
        let q = Rational::from_integer(qn(nu));
        let rep = cylinder_int_empty(&v, &q, &r2[nu]);
        if !rep.empty {
            return Outcome::Reject(0);
        }
        let allowed = |p: &IVec3| nu > 0 && (*p == recs[nu - 1] || *p == sub(u, &recs[nu - 1]));
        let stray = rep.boundary.iter().any(|b| b.kind == PointClass::Lateral && !allowed(&b.point));
        if stray {
            return Outcome::Reject(0);
        }
        boundary[nu] = rep.boundary;
    }
    let side = dot(&plane_through(&recs[n - 1]).expect("records are primitive").normal, u);
    Outcome::Accept(Box::new(StepCertificate {
        n,
        w: u.clone(),
        branch: false,
        side,
        r2,
        v_over_pi: vop,
        step2,
        step2_bound,
        drift_bound: t,
        boundary,
        tested: 0,
        rejected: [0; 6],
    }))
}

fn accept(state: &ConstructionState, delta: &TargetInterval, branch: bool, mut cert: StepCertificate) -> ConstructionState {
    cert.branch = branch;
    let mut next = state.clone();
    next.records.push(cert.w.clone());
    next.targets.push(delta.clone());
    next.r2 = cert.r2.clone();
    next.v_over_pi = cert.v_over_pi.clone();
    next.branches.push(branch);
    next.certificates.push(cert);
    next
}

/// One inductive step: finds `w_n` with all six properties verified exactly.
pub fn step(state: &ConstructionState, delta: &TargetInterval, branch: bool, opts: &BuildOptions) -> Result<ConstructionState> {
    match opts.strategy {
        Strategy::Sweep => step_sweep(state, delta, branch, opts),
        Strategy::Strips => strips::step_strips(state, delta, branch, opts),
    }
}

/// Resumable position of a sweep: window index and offset inside it.
#[derive(Debug, Clone, Default)]
pub struct SweepCursor {
    pub window: usize,
    pub pos: usize,
}

#[derive(Debug, Default)]
struct Tally {
    tested: usize,
    rejected: [usize; 6],
    x_reached: BigInt,
}

/// Continues the sweep from `cursor`; on success the cursor points past the
/// accepted candidate. `Ok(None)` means the window or test budget ran out.
fn sweep_search(
    state: &ConstructionState,
    delta: &TargetInterval,
    branch: bool,
    opts: &BuildOptions,
    cursor: &mut SweepCursor,
    tally: &mut Tally,
) -> Result<Option<StepCertificate>> {
    let n = state.n() + 1;
    let w = state.last().clone();
    let q = w[0].clone();
    let normal = plane_through(&w)?.normal;
    let lat = CLattice::new(&w);
    let (lo_down, hi_up) = delta.outer_bounds();
    let step_factor = pow4(n + 1);
    let limit = tally.tested + opts.test_budget.max(1);
    while cursor.window < opts.budget.max(1) {
        let bound = |k: usize| &q * (BigInt::from(8) << (2 * k));
        let mut x_after = if cursor.window == 0 { q.clone() } else { bound(cursor.window - 1) };
        let mut x_max = bound(cursor.window);
        let mut last = false;
        if let Some(cap) = &opts.q_cap {
            if &x_max >= cap {
                x_max = cap.clone();
                last = true;
            }
            if &x_after > cap {
                x_after = cap.clone();
            }
        }
        if x_max > x_after {
            let win = Window {
                x_after: &x_after,
                x_max: &x_max,
                lo_down: &lo_down,
                hi_up: &hi_up,
                step_factor: &step_factor,
                normal: &normal,
                negative_side: branch,
            };
            for cand in window_candidates(&lat, &win).skip(cursor.pos) {
                if tally.tested >= limit {
                    return Ok(None);
                }
                let u = &cand.u;
                cursor.pos += 1;
                tally.tested += 1;
                tally.x_reached = u[0].clone();
                match check_candidate(state, delta, u) {
                    Outcome::Reject(i) => tally.rejected[i] += 1,
                    Outcome::Accept(mut c) => {
                        c.tested = tally.tested;
                        c.rejected = tally.rejected;
                        return Ok(Some(*c));
                    }
                }
            }
        }
        tally.x_reached = x_max;
        cursor.window += 1;
        cursor.pos = 0;
        if last {
            break;
        }
    }
    Ok(None)
}

fn exhausted(n: usize, tally: &Tally) -> Error {
    Error::SearchExhausted(format!(
        "step {n}: no admissible point up to denominator {} ({} tested, rejections by property {:?})",
        tally.x_reached, tally.tested, tally.rejected
    ))
}

fn step_sweep(state: &ConstructionState, delta: &TargetInterval, branch: bool, opts: &BuildOptions) -> Result<ConstructionState> {
    let mut cursor = SweepCursor::default();
    let mut tally = Tally::default();
    match sweep_search(state, delta, branch, opts, &mut cursor, &mut tally)? {
        Some(cert) => Ok(accept(state, delta, branch, cert)),
        None => Err(exhausted(state.n() + 1, &tally)),
    }
}

#[derive(Debug, Clone)]
pub struct ConstructionResult {
    pub state: ConstructionState,
    /// `v_N = p_N / q_N`.
    pub v: [Rational; 2],
    /// `|v - v_N| <= 2^(1-N)` for the limit vector v.
    pub error_bound: Rational,
}

/// Runs `n_max` steps with the given targets and branch bits.
pub fn construct(targets: &[TargetInterval], branch_bits: &[bool], n_max: usize, opts: &BuildOptions) -> Result<ConstructionResult> {
    construct_with(targets, branch_bits, n_max, opts, |_| {})
}

/// As [`construct`], calling `on_step` after every accepted step.
pub fn construct_with(
    targets: &[TargetInterval],
    branch_bits: &[bool],
    n_max: usize,
    opts: &BuildOptions,
    mut on_step: impl FnMut(&ConstructionState),
) -> Result<ConstructionResult> {
    if n_max > targets.len() {
        return Err(Error::InvalidInput(format!("{n_max} steps need {n_max} targets, got {}", targets.len())));
    }
    if n_max > branch_bits.len() {
        return Err(Error::InvalidInput(format!("{n_max} steps need {n_max} branch bits, got {}", branch_bits.len())));
    }
    if opts.strategy == Strategy::Strips {
        let mut state = ConstructionState::initial();
        for i in 0..n_max {
            state = step(&state, &targets[i], branch_bits[i], opts)?;
            on_step(&state);
        }
        return Ok(finish(state));
    }
    // depth-first over sweep results: a step that exhausts its test budget
    // resumes the sweep of the step before it
    let mut states = vec![ConstructionState::initial()];
    let mut cursors = vec![SweepCursor::default()];
    let mut backtracks = 0;
    let mut tally = Tally::default();
    while states.len() <= n_max {
        let i = states.len() - 1;
        let found = sweep_search(&states[i], &targets[i], branch_bits[i], opts, &mut cursors[i], &mut tally)?;
        match found {
            Some(cert) => {
                let next = accept(&states[i], &targets[i], branch_bits[i], cert);
                on_step(&next);
                states.push(next);
                cursors.push(SweepCursor::default());
                tally = Tally::default();
            }
            None => {
                if i == 0 || backtracks >= opts.max_backtracks {
                    return Err(exhausted(i + 1, &tally));
                }
                backtracks += 1;
                states.pop();
                cursors.pop();
                tally = Tally::default();
            }
        }
    }
    Ok(finish(states.pop().unwrap()))
}

pub fn finish(state: ConstructionState) -> ConstructionResult {
    let n = state.n();
    let error_bound = if n == 0 { Rational::from_integer(2.into()) } else { Rational::new(BigInt::one(), BigInt::one() << (n - 1)) };
    ConstructionResult { v: state.v(), error_bound, state }
}

/// First step of a replay that does not verify.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StepFailure {
    pub step: usize,
    /// Failing property (1 to 6), or None for a structural problem.
    pub property: Option<u8>,
    pub reason: String,
}

impl fmt::Display for StepFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.property {
            Some(p) => write!(f, "step {}: property {p} fails: {}", self.step, self.reason),
            None => write!(f, "step {}: {}", self.step, self.reason),
        }
    }
}

/// Re-verifies a recorded sequence `w_0, ..., w_N` from scratch against the
/// targets and branch bits.
pub fn replay(records: &[IVec3], targets: &[TargetInterval], branches: &[bool]) -> std::result::Result<ConstructionState, StepFailure> {
    let fail = |step: usize, property: Option<u8>, reason: &str| StepFailure { step, property, reason: reason.to_string() };
    let init = ConstructionState::initial();
    if records.first() != init.records.first() {
        return Err(fail(0, None, "w_0 must be (1, 0, 0)"));
    }
    let n = records.len() - 1;
    if targets.len() < n || branches.len() < n {
        return Err(fail(n, None, "fewer targets or branch bits than steps"));
    }
    let mut state = init;
    for i in 0..n {
        let u = &records[i + 1];
        let side = dot(&plane_through(state.last()).map_err(|e| fail(i + 1, None, &e.to_string()))?.normal, u);
        if side.is_zero() || side.is_negative() != branches[i] {
            return Err(fail(i + 1, None, "record on the wrong side for its branch bit"));
        }
        match check_candidate(&state, &targets[i], u) {
            Outcome::Reject(p) => return Err(fail(i + 1, Some(p as u8 + 1), "exact recheck failed")),
            Outcome::Accept(c) => state = accept(&state, &targets[i], branches[i], *c),
        }
    }
    Ok(state)
}

/// Compares recorded certificate values with a replayed state.
pub fn compare_certificates(recorded: &[StepCertificate], replayed: &ConstructionState) -> std::result::Result<(), StepFailure> {
    if recorded.len() != replayed.certificates.len() {
        return Err(StepFailure { step: recorded.len().min(replayed.certificates.len()), property: None, reason: "certificate count differs from step count".into() });
    }
    for (a, b) in recorded.iter().zip(&replayed.certificates) {
        let bad = |p: u8, what: &str| Err(StepFailure { step: a.n, property: Some(p), reason: format!("recorded {what} differs from the recomputed value") });
        if a.w != b.w {
            return bad(2, "w_n");
        }
        if a.r2 != b.r2 {
            return bad(3, "R^2");
        }
        if a.v_over_pi != b.v_over_pi {
            return bad(4, "V/pi");
        }
        if a.step2 != b.step2 || a.step2_bound != b.step2_bound {
            return bad(5, "|v_n - v_(n-1)|^2");
        }
        if a.drift_bound != b.drift_bound {
            return bad(6, "drift bound");
        }
    }
    Ok(())
}

#[derive(Debug, Clone)]
pub struct LimitReport {
    pub depth: usize,
    pub passed: bool,
    /// First index where the recomputed chain differs from the records.
    pub mismatch: Option<usize>,
    /// Best approximations of `v_N` found independently.
    pub chain: Vec<IVec3>,
    /// Whether the denominator scan agreed too (run when `q_depth` is small).
    pub scan_checked: bool,
    /// Distance from `v_N` within which the first `depth + 1`
    /// approximations are expected to persist, `2 sqrt(hi_N / q_N) / q_{N-1}`.
    pub margin: f64,
    pub proxy_error: f64,
}

/// Recomputes the best approximations of `v_N` and compares them with
/// `w_0..w_depth`.
pub fn validate_limit(result: &ConstructionResult, depth: usize) -> Result<LimitReport> {
    let st = &result.state;
    let big_n = st.n();
    if depth + 2 > big_n {
        return Err(Error::MarginTooSmall(format!("depth {depth} needs at least {} steps, have {big_n}", depth + 2)));
    }
    let v = &result.v;
    let want = &st.records[..=depth];
    let chain = approx2d::lattice_chain(v, depth + 1, Some(&want[depth][0]));
    let got: Vec<IVec3> = chain.records.iter().map(|r| r.point()).collect();
    let mut mismatch = (0..=depth).find(|&i| got.get(i) != Some(&want[i]));
    let mut scan_checked = false;
    if let Some(qd) = want[depth][0].to_u64().filter(|&q| q <= 1_000_000) {
        let tv = approx2d::TargetVector::rational(v[0].clone(), v[1].clone());
        let scan = approx2d::best_approx_seq(&tv, qd)?;
        let pts: Vec<IVec3> = scan.records.iter().map(|r| r.point()).collect();
        if mismatch.is_none() {
            mismatch = (0..=depth).find(|&i| pts.get(i) != Some(&want[i]));
        }
        scan_checked = true;
    }
    let hi = st.targets[big_n - 1].hi.to_f64();
    let qn = crate::exact::to_f64(&Rational::from_integer(st.records[big_n][0].clone()));
    let qn1 = crate::exact::to_f64(&Rational::from_integer(st.records[big_n - 1][0].clone()));
    Ok(LimitReport {
        depth,
        passed: mismatch.is_none(),
        mismatch,
        chain: got,
        scan_checked,
        margin: 2.0 * (hi / qn).sqrt() / qn1,
        proxy_error: crate::exact::to_f64(&result.error_bound),
    })
}

/// Branch bits from a hex number: bit k of the value is the branch of step
/// k + 1, so `0x08` flips only `branch_bits[3]`.
pub fn parse_branch_bits(hex: &str) -> Result<Vec<bool>> {
    let digits = hex.trim();
    let digits = digits.strip_prefix("0x").or_else(|| digits.strip_prefix("0X")).unwrap_or(digits);
    let mut bits = Vec::with_capacity(digits.len() * 4);
    for (i, ch) in digits.chars().rev().enumerate() {
        let d = ch.to_digit(16).ok_or_else(|| Error::parse(digits.len() - 1 - i, format!("bad hex digit {ch:?}")))?;
        bits.extend((0..4).map(|k| (d >> k) & 1 == 1));
    }
    Ok(bits)
}

/// Whether two results have exactly equal limit proxies.
pub fn same_vector(a: &ConstructionResult, b: &ConstructionResult) -> bool {
    a.v == b.v
}

pub(crate) fn frame_for(state: &ConstructionState, branch: bool) -> Result<crate::lattice3::Frame> {
    build_frame(state.last(), branch)
}

pub(crate) fn lambda_star(delta: &TargetInterval, attempt: usize) -> Result<RealExpr> {
    // midpoint nudged by an irrational multiple of the width
    let mid = delta.midpoint();
    let w = delta.width();
    let nudge = &w / Rational::from_integer(BigInt::from(16 * (attempt + 1)));
    let lam = RealExpr::rational(mid) + RealExpr::rational(nudge) * RealExpr::int(2).sqrt();
    let inside = certified_compare(&lam, &RealExpr::from_surd(&delta.lo), approx2d::MAX_PRECISION) == CertifiedOrdering::Greater
        && certified_compare(&lam, &RealExpr::from_surd(&delta.hi), approx2d::MAX_PRECISION) == CertifiedOrdering::Less;
    if !inside {
        return Err(Error::InvalidInput(format!("target {delta} too narrow")));
    }
    Ok(lam)
}
