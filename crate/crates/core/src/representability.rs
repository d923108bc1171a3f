//! Deciding whether partial correlation data admits a joint classical
//! distribution, and computing the exact range of an unmeasured correlation.
//!
//! Two independent routes are implemented and cross-checked:
//!
//! * a closed-form interval for the three-variable marginal problem
//!   ([`bell_wigner_interval`]), and
//! * an exact linear program over atom weights ([`lp_interval`]).
//!
//! For the four-observable two-context scenario ([`BchScenario`]) the
//! decision reduces to intersecting two such intervals, which is equivalent
//! to the eight Fine inequalities ([`fine_inequalities`]); [`bch_check`]
//! computes all three views and, when the data is representable, constructs
//! an explicit joint distribution witnessing it.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::probability::{
    atom_varmask, monomial_coeff, Distribution, Domain, MomentConstraints, VariableSet,
};
use crate::simplex::{self, LpSolution};
use crate::tolerance;
use crate::tree::{extend_tree, CompatibilityGraph, GraphEdge};

/// Largest variable count accepted by the LP routines (atom tables double
/// per variable).
pub const MAX_LP_VARIABLES: usize = 12;

/// Why an interval is empty.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EmptyKind {
    /// Both bound families are individually satisfiable but the lower
    /// bounds exceed the upper bounds.
    DisjointBounds,
    /// The constraint set itself has no solution.
    Infeasible,
}

/// A closed interval of attainable values, possibly empty.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
    pub empty: bool,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub kind: Option<EmptyKind>,
}

impl Interval {
    /// Builds an interval from raw bounds; it is empty when the lower bound
    /// exceeds the upper by more than the global tolerance.
    pub fn from_bounds(lo: f64, hi: f64) -> Interval {
        let empty = lo > hi + tolerance();
        Interval {
            lo,
            hi,
            empty,
            kind: if empty { Some(EmptyKind::DisjointBounds) } else { None },
        }
    }

    /// The empty interval arising from infeasible constraints.
    pub fn infeasible() -> Interval {
        Interval { lo: 0.0, hi: -1.0, empty: true, kind: Some(EmptyKind::Infeasible) }
    }

    /// Intersection of two intervals.
    pub fn intersect(&self, other: &Interval) -> Interval {
        if self.kind == Some(EmptyKind::Infeasible) || other.kind == Some(EmptyKind::Infeasible) {
            return Interval::infeasible();
        }
        Interval::from_bounds(self.lo.max(other.lo), self.hi.min(other.hi))
    }

    /// Length of the interval (zero when empty).
    pub fn width(&self) -> f64 {
        if self.empty {
            0.0
        } else {
            (self.hi - self.lo).max(0.0)
        }
    }

    /// Membership within the global tolerance.
    pub fn contains(&self, x: f64) -> bool {
        !self.empty && x >= self.lo - tolerance() && x <= self.hi + tolerance()
    }
}

/// The five moments feeding the closed-form interval, already identified:
/// two target singles, the shared single, and the two target-shared pairs.
struct ThreeVarShape {
    a1: f64,
    a2: f64,
    b: f64,
    p: f64,
    q: f64,
}

fn identify_three_var_shape(m: &MomentConstraints) -> Result<ThreeVarShape> {
    let vars = m.vars();
    if vars.len() != 3 {
        return Err(Error::InvalidMoments(format!(
            "closed-form interval needs exactly 3 variables, got {}",
            vars.len()
        )));
    }
    if vars.domain() != Domain::ZeroOne {
        return Err(Error::InvalidMoments(
            "closed-form interval requires the {0,1} convention".into(),
        ));
    }
    let mut pair_masks = Vec::new();
    for (mask, _) in m.iter() {
        match mask.count_ones() {
            1 => {}
            2 => pair_masks.push(mask),
            _ => {
                return Err(Error::InvalidMoments(format!(
                    "unexpected monomial <{}>",
                    m.monomial_names(mask).join(" ")
                )))
            }
        }
    }
    let singles_present = (0..3).all(|i| m.get_mask(1 << i).is_some());
    if !singles_present || pair_masks.len() != 2 || m.len() != 5 {
        return Err(Error::InvalidMoments(
            "closed-form interval needs the 3 singles and exactly 2 pairs sharing one variable"
                .into(),
        ));
    }
    let shared = pair_masks[0] & pair_masks[1];
    let targets = pair_masks[0] ^ pair_masks[1];
    if shared.count_ones() != 1 || targets.count_ones() != 2 {
        return Err(Error::InvalidMoments(
            "the two pair monomials must share exactly one variable".into(),
        ));
    }
    let t1 = targets.trailing_zeros();
    let t2 = 31 - targets.leading_zeros();
    let grab = |mask: u32| m.get_mask(mask).expect("presence checked above");
    let a1 = grab(1 << t1);
    let a2 = grab(1 << t2);
    let b = grab(shared);
    let p = grab(shared | (1 << t1));
    let q = grab(shared | (1 << t2));

    // Each (single, single, pair) triple must itself be realizable.
    let tol = tolerance();
    for (a, pair, name) in [(a1, p, t1), (a2, q, t2)] {
        if pair > a.min(b) + tol || pair < a + b - 1.0 - tol || pair < -tol {
            return Err(Error::InvalidMoments(format!(
                "pair moment <{} {}> = {pair} is inconsistent with its singles {a} and {b}",
                vars.names()[name as usize],
                vars.monomial_names(shared)[0]
            )));
        }
    }
    Ok(ThreeVarShape { a1, a2, b, p, q })
}

/// Exact attainable range of the unmeasured pair moment `<T1 T2>` given the
/// singles `<T1>, <T2>, <B>` and the measured pairs `<T1 B>, <T2 B>` in the
/// `{0,1}` convention.
///
/// The bounds are the facets of the three-variable marginal polytope that
/// involve the unmeasured pair; the result therefore coincides with
/// [`lp_interval`] on the same data, and is never empty for realizable
/// inputs.
pub fn bell_wigner_interval(m: &MomentConstraints) -> Result<Interval> {
    let s = identify_three_var_shape(m)?;
    let ThreeVarShape { a1, a2, b, p, q, .. } = s;
    let lo = 0.0f64
        .max(p + q - b)
        .max(a1 + a2 + b - p - q - 1.0)
        .max(a1 + a2 - 1.0);
    let hi = a1.min(a2).min(a2 - q + p).min(a1 - p + q);
    Ok(Interval::from_bounds(lo, hi))
}

/// Builds the equality system `A w = b` expressing the moment constraints
/// over atom weights, with the normalization row first.
fn moment_system(m: &MomentConstraints) -> Result<(Vec<Vec<f64>>, Vec<f64>)> {
    let n = m.vars().len();
    if n > MAX_LP_VARIABLES {
        return Err(Error::InvalidMoments(format!(
            "{n} variables exceed the linear-programming limit of {MAX_LP_VARIABLES}"
        )));
    }
    let atoms = 1usize << n;
    let domain = m.vars().domain();
    let mut a = vec![vec![1.0; atoms]];
    let mut b = vec![1.0];
    for (mask, value) in m.iter() {
        a.push(
            (0..atoms)
                .map(|idx| monomial_coeff(domain, mask, atom_varmask(idx, n)))
                .collect(),
        );
        b.push(value);
    }
    Ok((a, b))
}

/// Exact attainable range of a monomial's expectation over all
/// distributions matching the given moments, by linear programming over
/// atom weights. Returns the infeasible interval when no distribution
/// matches the moments at all.
pub fn lp_interval<S: AsRef<str>>(target: &[S], m: &MomentConstraints) -> Result<Interval> {
    let n = m.vars().len();
    let mask = m.vars().mask_of(target)?;
    let (a, b) = moment_system(m)?;
    let domain = m.vars().domain();
    let c: Vec<f64> = (0..(1usize << n))
        .map(|idx| monomial_coeff(domain, mask, atom_varmask(idx, n)))
        .collect();
    let lo = match simplex::minimize(&a, &b, &c)? {
        LpSolution::Optimal { value, .. } => value,
        LpSolution::Infeasible => return Ok(Interval::infeasible()),
    };
    let hi = match simplex::maximize(&a, &b, &c)? {
        LpSolution::Optimal { value, .. } => value,
        LpSolution::Infeasible => return Ok(Interval::infeasible()),
    };
    Ok(Interval::from_bounds(lo, hi))
}

/// True when some distribution matches all given moments.
pub fn lp_feasible(m: &MomentConstraints) -> Result<bool> {
    let (a, b) = moment_system(m)?;
    Ok(simplex::feasible_point(&a, &b)?.is_some())
}

/// A distribution matching all given moments, when one exists.
pub fn lp_feasible_distribution(m: &MomentConstraints) -> Result<Option<Distribution>> {
    let (a, b) = moment_system(m)?;
    let Some(x) = simplex::feasible_point(&a, &b)? else {
        return Ok(None);
    };
    // Basic solutions can carry harmless negative round-off; clamp and
    // renormalize before validating.
    let clamped: Vec<f64> = x.iter().map(|&w| w.max(0.0)).collect();
    let total: f64 = clamped.iter().sum();
    if (total - 1.0).abs() > tolerance() {
        return Err(Error::Internal(format!(
            "feasible point has total mass {total}"
        )));
    }
    let weights = clamped.iter().map(|&w| w / total).collect();
    Ok(Some(Distribution::new(m.vars().clone(), weights).map_err(
        |e| Error::Internal(format!("feasible point is not a distribution: {e}")),
    )?))
}

/// Correlation data for the four-observable scenario: two observables
/// `A1, A2` on one side, `B1, B2` on the other, with all singles and the
/// four cross pairs `<Ai Bj>` known in the `{0,1}` convention. The two
/// same-side pairs are unmeasured.
#[derive(Clone, Debug)]
pub struct BchScenario {
    moments: MomentConstraints,
}

/// Canonical variable order of a [`BchScenario`].
pub const BCH_VARIABLES: [&str; 4] = ["A1", "A2", "B1", "B2"];

impl BchScenario {
    /// Validates and canonicalizes a moment set: the variables must be
    /// exactly `A1, A2, B1, B2` in the `{0,1}` convention, the entries must
    /// be exactly the 4 singles and 4 cross pairs, and every pair must be
    /// realizable with its singles.
    pub fn new(moments: MomentConstraints) -> Result<BchScenario> {
        if moments.vars().domain() != Domain::ZeroOne {
            return Err(Error::InvalidMoments(
                "the four-observable scenario uses the {0,1} convention".into(),
            ));
        }
        if moments.vars().len() != 4
            || BCH_VARIABLES.iter().any(|v| !moments.vars().contains(v))
        {
            return Err(Error::InvalidVariables(format!(
                "expected variables {}, got {}",
                BCH_VARIABLES.join(", "),
                moments.vars().names().join(", ")
            )));
        }
        let canon_vars = VariableSet::new(BCH_VARIABLES, Domain::ZeroOne)?;
        let mut canon = MomentConstraints::new(canon_vars);
        let mut expected: Vec<Vec<String>> = BCH_VARIABLES
            .iter()
            .map(|v| vec![v.to_string()])
            .collect();
        for i in 1..=2 {
            for j in 1..=2 {
                expected.push(vec![format!("A{i}"), format!("B{j}")]);
            }
        }
        for monomial in &expected {
            let value = moments.get(monomial)?.ok_or_else(|| {
                Error::IncompleteMoments(format!("<{}>", monomial.join(" ")))
            })?;
            canon.insert(monomial, value)?;
        }
        if moments.len() != expected.len() {
            for (mask, _) in moments.iter() {
                let names: Vec<String> = moments
                    .monomial_names(mask)
                    .iter()
                    .map(|s| s.to_string())
                    .collect();
                if !expected.contains(&names) {
                    return Err(Error::InvalidMoments(format!(
                        "unexpected monomial <{}>",
                        names.join(" ")
                    )));
                }
            }
        }
        let scenario = BchScenario { moments: canon };
        let tol = tolerance();
        for i in 1..=2 {
            for j in 1..=2 {
                let a = scenario.single_a(i);
                let b = scenario.single_b(j);
                let p = scenario.pair(i, j);
                if p > a.min(b) + tol || p < a + b - 1.0 - tol {
                    return Err(Error::InvalidMoments(format!(
                        "<A{i} B{j}> = {p} is inconsistent with <A{i}> = {a} and <B{j}> = {b}"
                    )));
                }
            }
        }
        Ok(scenario)
    }

    /// Builds a scenario from plain values; `ab[i][j]` is `<A(i+1) B(j+1)>`.
    pub fn from_values(
        a1: f64,
        a2: f64,
        b1: f64,
        b2: f64,
        ab: [[f64; 2]; 2],
    ) -> Result<BchScenario> {
        let vars = VariableSet::new(BCH_VARIABLES, Domain::ZeroOne)?;
        let mut m = MomentConstraints::new(vars);
        m.insert(&["A1"], a1)?;
        m.insert(&["A2"], a2)?;
        m.insert(&["B1"], b1)?;
        m.insert(&["B2"], b2)?;
        for i in 1..=2usize {
            for j in 1..=2usize {
                m.insert(&[format!("A{i}"), format!("B{j}")], ab[i - 1][j - 1])?;
            }
        }
        BchScenario::new(m)
    }

    pub fn moments(&self) -> &MomentConstraints {
        &self.moments
    }

    /// `<Ai>` for `i` in 1..=2.
    pub fn single_a(&self, i: usize) -> f64 {
        self.moments
            .get(&[format!("A{i}")])
            .expect("valid name")
            .expect("validated at construction")
    }

    /// `<Bj>` for `j` in 1..=2.
    pub fn single_b(&self, j: usize) -> f64 {
        self.moments
            .get(&[format!("B{j}")])
            .expect("valid name")
            .expect("validated at construction")
    }

    /// `<Ai Bj>` for `i, j` in 1..=2.
    pub fn pair(&self, i: usize, j: usize) -> f64 {
        self.moments
            .get(&[format!("A{i}"), format!("B{j}")])
            .expect("valid names")
            .expect("validated at construction")
    }

    /// The five moments over `A1, A2, Bj` that constrain the unmeasured
    /// pair `<A1 A2>` through side `j`.
    pub fn three_var_moments(&self, j: usize) -> MomentConstraints {
        let b = format!("B{j}");
        let vars = VariableSet::new(["A1".to_string(), "A2".to_string(), b.clone()], Domain::ZeroOne)
            .expect("fixed names are valid");
        let mut m = MomentConstraints::new(vars);
        m.insert(&["A1"], self.single_a(1)).expect("in range");
        m.insert(&["A2"], self.single_a(2)).expect("in range");
        m.insert(&[b.clone()], self.single_b(j)).expect("in range");
        m.insert(&["A1".to_string(), b.clone()], self.pair(1, j))
            .expect("in range");
        m.insert(&["A2".to_string(), b], self.pair(2, j))
            .expect("in range");
        m
    }
}

/// The eight one-sided residuals of the Fine inequalities, ordered
/// `[F11, F12, F21, F22, -1-F11, -1-F12, -1-F21, -1-F22]` where
/// `Fij = <Ai Bj> + <Ai Bk> + <Al Bj> - <Al Bk> - <Ai> - <Bj>` with
/// `l = 3-i`, `k = 3-j`. The data is representable exactly when every
/// residual is non-positive (within tolerance).
pub fn fine_inequalities(s: &BchScenario) -> [f64; 8] {
    let mut f = [0.0; 4];
    for i in 1..=2usize {
        for j in 1..=2usize {
            let l = 3 - i;
            let k = 3 - j;
            f[(i - 1) * 2 + (j - 1)] = s.pair(i, j) + s.pair(i, k) + s.pair(l, j)
                - s.pair(l, k)
                - s.single_a(i)
                - s.single_b(j);
        }
    }
    [
        f[0], f[1], f[2], f[3],
        -1.0 - f[0], -1.0 - f[1], -1.0 - f[2], -1.0 - f[3],
    ]
}

/// True when all Fine residuals are non-positive within tolerance.
pub fn fine_satisfied(residuals: &[f64; 8]) -> bool {
    let tol = tolerance();
    residuals.iter().all(|&r| r <= tol)
}

/// Everything [`bch_check`] determines about a scenario.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RepresentabilityReport {
    /// Attainable `<A1 A2>` range using the `B1` context pair.
    pub interval_b1: Interval,
    /// Attainable `<A1 A2>` range using the `B2` context pair.
    pub interval_b2: Interval,
    /// Intersection of the two ranges; non-empty exactly when the data is
    /// representable.
    pub intersection: Interval,
    /// The eight Fine residuals (all non-positive iff representable).
    pub fine_residuals: [f64; 8],
    /// Whether a joint distribution over all four observables exists.
    pub representable: bool,
    /// A joint distribution over `A1, A2, B1, B2` reproducing all measured
    /// moments, present exactly when `representable` is true.
    pub witness: Option<Distribution>,
}

/// Decides representability of four-observable correlation data.
///
/// Computes the attainable `<A1 A2>` interval through each side, intersects
/// them, and cross-checks the verdict against the Fine inequalities. When
/// the data is representable, an explicit witness distribution is
/// constructed by realizing `<A1 A2>` at the intersection midpoint on both
/// sides and gluing the two three-variable distributions over `{A1, A2}`.
pub fn bch_check(s: &BchScenario) -> Result<RepresentabilityReport> {
    let interval_b1 = bell_wigner_interval(&s.three_var_moments(1))?;
    let interval_b2 = bell_wigner_interval(&s.three_var_moments(2))?;
    let intersection = interval_b1.intersect(&interval_b2);
    let fine_residuals = fine_inequalities(s);
    let representable = !intersection.empty;
    if fine_satisfied(&fine_residuals) != representable {
        return Err(Error::Internal(format!(
            "interval intersection and Fine inequalities disagree: intersection {:?}, max residual {}",
            intersection,
            fine_residuals.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
        )));
    }
    let witness = if representable {
        Some(build_witness(s, (intersection.lo + intersection.hi) / 2.0)?)
    } else {
        None
    };
    Ok(RepresentabilityReport {
        interval_b1,
        interval_b2,
        intersection,
        fine_residuals,
        representable,
        witness,
    })
}

/// Realizes `<A1 A2> = c` on both sides and glues the results over the
/// shared `{A1, A2}` block, verifying that the extension reproduces every
/// measured moment.
fn build_witness(s: &BchScenario, c: f64) -> Result<Distribution> {
    let mut sides = Vec::with_capacity(2);
    for j in 1..=2 {
        let mut m = s.three_var_moments(j);
        m.insert(&["A1", "A2"], c)?;
        let d = lp_feasible_distribution(&m)?.ok_or_else(|| {
            Error::Internal(format!(
                "<A1 A2> = {c} lies in the closed-form interval but side {j} has no realization"
            ))
        })?;
        sides.push(d);
    }
    let [d1, d2] = <[Distribution; 2]>::try_from(sides).expect("two sides");
    let nodes = vec![
        VariableSet::new(["A1", "A2"], Domain::ZeroOne)?,
        VariableSet::new(["B1"], Domain::ZeroOne)?,
        VariableSet::new(["B2"], Domain::ZeroOne)?,
    ];
    let graph = CompatibilityGraph::new(
        nodes,
        vec![
            GraphEdge { a: 0, b: 1, dist: d1 },
            GraphEdge { a: 0, b: 2, dist: d2 },
        ],
    )?;
    let joint = extend_tree(&graph)?.joint.reorder(&BCH_VARIABLES)?;
    for (mask, value) in s.moments().iter() {
        let names = s.moments().monomial_names(mask);
        let got = joint.moment(&names)?;
        if (got - value).abs() > tolerance() {
            return Err(Error::Internal(format!(
                "witness misses <{}>: {got} vs {value}",
                names.join(" ")
            )));
        }
    }
    let got_c = joint.moment(&["A1", "A2"])?;
    if (got_c - c).abs() > tolerance() {
        return Err(Error::Internal(format!(
            "witness misses <A1 A2>: {got_c} vs {c}"
        )));
    }
    Ok(joint)
}
