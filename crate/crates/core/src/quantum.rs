//! Dense complex-matrix quantum machinery: pure states, Hermitian yes/no
//! observables in two outcome conventions, tensor products, expectation
//! values, and the joint outcome distribution of a commuting measurement
//! context.
//!
//! Everything is small and exact-ish by design — the systems handled here
//! have dimension at most 8, so dense `Vec<Complex64>` storage and naive
//! matrix products are the simplest correct tool.

use std::collections::BTreeSet;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::probability::{Atom, Distribution, Domain, VariableSet};
use crate::tolerance;

/// Dense row-major complex matrix.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "MatrixRepr", into = "MatrixRepr")]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

/// Serialized form: `{"rows":r,"cols":c,"data":[[re,im],...]}` row-major.
#[derive(Clone, Serialize, Deserialize)]
struct MatrixRepr {
    rows: usize,
    cols: usize,
    data: Vec<[f64; 2]>,
}

impl From<ComplexMatrix> for MatrixRepr {
    fn from(m: ComplexMatrix) -> Self {
        MatrixRepr {
            rows: m.rows,
            cols: m.cols,
            data: m.data.iter().map(|z| [z.re, z.im]).collect(),
        }
    }
}

impl TryFrom<MatrixRepr> for ComplexMatrix {
    type Error = Error;

    fn try_from(r: MatrixRepr) -> Result<Self> {
        if r.data.len() != r.rows * r.cols {
            return Err(Error::DimensionMismatch {
                expected: r.rows * r.cols,
                got: r.data.len(),
            });
        }
        if r.data.iter().any(|[re, im]| !re.is_finite() || !im.is_finite()) {
            return Err(Error::InvalidObservable("non-finite matrix entry".into()));
        }
        Ok(ComplexMatrix {
            rows: r.rows,
            cols: r.cols,
            data: r.data.iter().map(|&[re, im]| Complex64::new(re, im)).collect(),
        })
    }
}

impl ComplexMatrix {
    /// Zero matrix of the given shape.
    pub fn zeros(rows: usize, cols: usize) -> ComplexMatrix {
        ComplexMatrix { rows, cols, data: vec![Complex64::ZERO; rows * cols] }
    }

    /// Identity matrix of dimension `n`.
    pub fn identity(n: usize) -> ComplexMatrix {
        let mut m = ComplexMatrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Complex64::ONE);
        }
        m
    }

    /// Builds a matrix entry by entry.
    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> Complex64) -> Self {
        let mut m = ComplexMatrix::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m.set(i, j, f(i, j));
            }
        }
        m
    }

    /// Real matrix from rows of `f64`.
    pub fn from_real(rows: &[&[f64]]) -> ComplexMatrix {
        let r = rows.len();
        let c = if r == 0 { 0 } else { rows[0].len() };
        ComplexMatrix::from_fn(r, c, |i, j| Complex64::new(rows[i][j], 0.0))
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: Complex64) {
        self.data[i * self.cols + j] = value;
    }

    fn same_shape(&self, other: &ComplexMatrix) -> Result<()> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch {
                expected: self.rows * self.cols,
                got: other.rows * other.cols,
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &ComplexMatrix) -> Result<ComplexMatrix> {
        self.same_shape(other)?;
        Ok(ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn sub(&self, other: &ComplexMatrix) -> Result<ComplexMatrix> {
        self.same_shape(other)?;
        Ok(ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        })
    }

    pub fn scale(&self, factor: Complex64) -> ComplexMatrix {
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z * factor).collect(),
        }
    }

    pub fn mul(&self, other: &ComplexMatrix) -> Result<ComplexMatrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                got: other.rows,
            });
        }
        let mut out = ComplexMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == Complex64::ZERO {
                    continue;
                }
                for j in 0..other.cols {
                    let v = out.get(i, j) + a * other.get(k, j);
                    out.set(i, j, v);
                }
            }
        }
        Ok(out)
    }

    /// Largest entry-wise deviation from `M = M†`.
    pub fn hermitian_deviation(&self) -> f64 {
        let mut dev: f64 = 0.0;
        for i in 0..self.rows {
            for j in 0..self.cols {
                dev = dev.max((self.get(i, j) - self.get(j, i).conj()).norm());
            }
        }
        dev
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Matrix-vector product.
    fn apply(&self, v: &[Complex64]) -> Result<Vec<Complex64>> {
        if self.cols != v.len() {
            return Err(Error::DimensionMismatch { expected: self.cols, got: v.len() });
        }
        Ok((0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.get(i, j) * v[j]).sum())
            .collect())
    }
}

/// Kronecker (tensor) product `a ⊗ b`.
pub fn tensor(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let mut out = ComplexMatrix::zeros(a.rows() * b.rows(), a.cols() * b.cols());
    for ia in 0..a.rows() {
        for ja in 0..a.cols() {
            let f = a.get(ia, ja);
            if f == Complex64::ZERO {
                continue;
            }
            for ib in 0..b.rows() {
                for jb in 0..b.cols() {
                    out.set(ia * b.rows() + ib, ja * b.cols() + jb, f * b.get(ib, jb));
                }
            }
        }
    }
    out
}

/// The three Pauli axes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum PauliAxis {
    X,
    Y,
    Z,
}

/// The 2x2 Pauli matrix for an axis.
pub fn pauli(axis: PauliAxis) -> ComplexMatrix {
    let i = Complex64::I;
    match axis {
        PauliAxis::X => ComplexMatrix::from_fn(2, 2, |r, c| {
            if r != c { Complex64::ONE } else { Complex64::ZERO }
        }),
        PauliAxis::Y => ComplexMatrix::from_fn(2, 2, |r, c| match (r, c) {
            (0, 1) => -i,
            (1, 0) => i,
            _ => Complex64::ZERO,
        }),
        PauliAxis::Z => ComplexMatrix::from_fn(2, 2, |r, c| match (r, c) {
            (0, 0) => Complex64::ONE,
            (1, 1) => -Complex64::ONE,
            _ => Complex64::ZERO,
        }),
    }
}

/// A normalized pure state vector.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<[f64; 2]>", into = "Vec<[f64; 2]>")]
pub struct PureState {
    amplitudes: Vec<Complex64>,
}

impl From<PureState> for Vec<[f64; 2]> {
    fn from(s: PureState) -> Self {
        s.amplitudes.iter().map(|z| [z.re, z.im]).collect()
    }
}

impl TryFrom<Vec<[f64; 2]>> for PureState {
    type Error = Error;

    fn try_from(v: Vec<[f64; 2]>) -> Result<Self> {
        PureState::new(v.iter().map(|&[re, im]| Complex64::new(re, im)).collect())
    }
}

impl PureState {
    /// Wraps an amplitude vector, requiring unit norm within tolerance.
    pub fn new(amplitudes: Vec<Complex64>) -> Result<PureState> {
        if amplitudes.is_empty() {
            return Err(Error::InvalidState("empty amplitude vector".into()));
        }
        let norm = amplitudes.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if !norm.is_finite() || (norm - 1.0).abs() > tolerance() {
            return Err(Error::InvalidState(format!("norm {norm} is not 1")));
        }
        Ok(PureState { amplitudes })
    }

    /// Normalizes an arbitrary non-zero vector into a state.
    pub fn normalized(amplitudes: Vec<Complex64>) -> Result<PureState> {
        let norm = amplitudes.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if !norm.is_finite() || norm <= tolerance() {
            return Err(Error::InvalidState(format!(
                "cannot normalize a vector of norm {norm}"
            )));
        }
        Ok(PureState {
            amplitudes: amplitudes.iter().map(|z| z / norm).collect(),
        })
    }

    /// Real amplitude vector convenience constructor (normalizes).
    pub fn from_real(amplitudes: &[f64]) -> Result<PureState> {
        PureState::normalized(amplitudes.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    /// `<self | m | self>`, without Hermiticity checks (internal use).
    fn quadratic_form(&self, m: &ComplexMatrix) -> Result<Complex64> {
        if m.rows() != self.dim() || m.cols() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), got: m.rows() });
        }
        let mv = m.apply(&self.amplitudes)?;
        Ok(self
            .amplitudes
            .iter()
            .zip(&mv)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }
}

/// Expectation value of a Hermitian operator in a pure state.
pub fn expectation(state: &PureState, operator: &ComplexMatrix) -> Result<f64> {
    if operator.rows() != operator.cols() {
        return Err(Error::DimensionMismatch {
            expected: operator.rows(),
            got: operator.cols(),
        });
    }
    let dev = operator.hermitian_deviation();
    if dev > tolerance() {
        return Err(Error::NonHermitian(dev));
    }
    let value = state.quadratic_form(operator)?;
    if value.im.abs() > tolerance() {
        return Err(Error::Internal(format!(
            "expectation of a Hermitian operator has imaginary part {}",
            value.im
        )));
    }
    Ok(value.re)
}

/// How a Hermitian matrix encodes a yes/no quantity.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Convention {
    /// An orthogonal projector; outcomes 0 and 1, "yes" projector is `M`.
    Projector,
    /// A ±1 observable (`M² = I`); "yes" (+1) projector is `(I + M)/2`.
    Sign,
}

impl Convention {
    /// Outcome domain induced on measurement results.
    pub fn domain(self) -> Domain {
        match self {
            Convention::Projector => Domain::ZeroOne,
            Convention::Sign => Domain::PlusMinus,
        }
    }
}

/// A Hermitian matrix validated as a binary observable under a convention.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ObservableRepr", into = "ObservableRepr")]
pub struct YesNoObservable {
    matrix: ComplexMatrix,
    convention: Convention,
}

#[derive(Clone, Serialize, Deserialize)]
struct ObservableRepr {
    convention: Convention,
    matrix: ComplexMatrix,
}

impl From<YesNoObservable> for ObservableRepr {
    fn from(o: YesNoObservable) -> Self {
        ObservableRepr { convention: o.convention, matrix: o.matrix }
    }
}

impl TryFrom<ObservableRepr> for YesNoObservable {
    type Error = Error;

    fn try_from(r: ObservableRepr) -> Result<Self> {
        YesNoObservable::new(r.matrix, r.convention)
    }
}

impl YesNoObservable {
    /// Validates squareness, Hermiticity, and the convention's algebraic
    /// identity (`M² = M` for projectors, `M² = I` for sign observables).
    pub fn new(matrix: ComplexMatrix, convention: Convention) -> Result<YesNoObservable> {
        if matrix.rows() != matrix.cols() {
            return Err(Error::DimensionMismatch {
                expected: matrix.rows(),
                got: matrix.cols(),
            });
        }
        let dev = matrix.hermitian_deviation();
        if dev > tolerance() {
            return Err(Error::NonHermitian(dev));
        }
        let square = matrix.mul(&matrix)?;
        let target = match convention {
            Convention::Projector => matrix.clone(),
            Convention::Sign => ComplexMatrix::identity(matrix.rows()),
        };
        let drift = square.sub(&target)?.max_abs();
        if drift > tolerance() {
            return Err(Error::InvalidObservable(format!(
                "matrix is not a {} (deviation {drift})",
                match convention {
                    Convention::Projector => "projector",
                    Convention::Sign => "sign observable",
                }
            )));
        }
        Ok(YesNoObservable { matrix, convention })
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn convention(&self) -> Convention {
        self.convention
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    /// Projector onto the outcome encoded by `bit` (1 = "yes" = outcome 1
    /// or +1 depending on convention).
    pub fn outcome_projector(&self, bit: u8) -> ComplexMatrix {
        let id = ComplexMatrix::identity(self.dim());
        match (self.convention, bit) {
            (Convention::Projector, 1) => self.matrix.clone(),
            (Convention::Projector, _) => id.sub(&self.matrix).expect("same shape"),
            (Convention::Sign, 1) => id
                .add(&self.matrix)
                .expect("same shape")
                .scale(Complex64::new(0.5, 0.0)),
            (Convention::Sign, _) => id
                .sub(&self.matrix)
                .expect("same shape")
                .scale(Complex64::new(0.5, 0.0)),
        }
    }
}

/// A measurement context: named observables that pairwise commute, so their
/// joint outcome distribution is well defined.
#[derive(Clone, Debug)]
pub struct Context {
    entries: Vec<(String, YesNoObservable)>,
}

impl Context {
    /// Validates name uniqueness, matching dimensions and conventions, and
    /// pairwise commutativity within tolerance.
    pub fn new(entries: Vec<(String, YesNoObservable)>) -> Result<Context> {
        if entries.is_empty() {
            return Err(Error::InvalidContext("empty context".into()));
        }
        let mut seen = BTreeSet::new();
        for (name, _) in &entries {
            if !seen.insert(name.clone()) {
                return Err(Error::InvalidContext(format!(
                    "observable `{name}` appears twice"
                )));
            }
        }
        let dim = entries[0].1.dim();
        let convention = entries[0].1.convention();
        for (name, obs) in &entries {
            if obs.dim() != dim {
                return Err(Error::DimensionMismatch { expected: dim, got: obs.dim() });
            }
            if obs.convention() != convention {
                return Err(Error::InvalidContext(format!(
                    "observable `{name}` mixes outcome conventions within one context"
                )));
            }
        }
        let mut worst: f64 = 0.0;
        for i in 0..entries.len() {
            for j in (i + 1)..entries.len() {
                let a = entries[i].1.matrix();
                let b = entries[j].1.matrix();
                let comm = a.mul(b)?.sub(&b.mul(a)?)?.max_abs();
                worst = worst.max(comm);
            }
        }
        if worst > tolerance() {
            return Err(Error::NonCommutingContext(worst));
        }
        Ok(Context { entries })
    }

    pub fn names(&self) -> Vec<&str> {
        self.entries.iter().map(|(n, _)| n.as_str()).collect()
    }

    pub fn observables(&self) -> impl Iterator<Item = (&str, &YesNoObservable)> {
        self.entries.iter().map(|(n, o)| (n.as_str(), o))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn convention(&self) -> Convention {
        self.entries[0].1.convention()
    }

    pub fn dim(&self) -> usize {
        self.entries[0].1.dim()
    }
}

/// Joint outcome distribution of a commuting context in a pure state: the
/// weight of each atom is the expectation of the product of the matching
/// outcome projectors.
pub fn joint_distribution(state: &PureState, context: &Context) -> Result<Distribution> {
    if state.dim() != context.dim() {
        return Err(Error::DimensionMismatch {
            expected: context.dim(),
            got: state.dim(),
        });
    }
    let n = context.len();
    let domain = context.convention().domain();
    let vars = VariableSet::new(
        context.entries.iter().map(|(name, _)| name.clone()),
        domain,
    )
    .map_err(|e| Error::InvalidContext(e.to_string()))?;
    let mut weights = Vec::with_capacity(1 << n);
    for index in 0..(1usize << n) {
        let atom = Atom::from_index(index, n);
        let mut projector = ComplexMatrix::identity(state.dim());
        for (pos, (_, obs)) in context.entries.iter().enumerate() {
            projector = projector.mul(&obs.outcome_projector(atom.bit(pos)))?;
        }
        let w = state.quadratic_form(&projector)?;
        if w.im.abs() > tolerance() {
            return Err(Error::Internal(format!(
                "outcome weight has imaginary part {} at atom {}",
                w.im,
                atom.bit_string()
            )));
        }
        weights.push(w.re);
    }
    Distribution::new(vars, weights).map_err(|e| {
        Error::Internal(format!("context produced an invalid distribution: {e}"))
    })
}
