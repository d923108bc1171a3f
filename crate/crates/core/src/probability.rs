//! Finite probability spaces over binary variables: atoms, marginals,
//! moments, conditioning, and the inversion between a full moment set and
//! its unique distribution.
//!
//! Variable order inside a [`VariableSet`] is canonical: the first variable
//! is the most significant bit of the atom index, so serialized weight
//! tables are reproducible. Bit value 1 encodes "yes" — outcome `1` in the
//! `{0,1}` convention and `+1` in the `{-1,+1}` convention.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tolerance;

/// Largest supported variable count; atom tables have `2^n` entries.
pub const MAX_VARIABLES: usize = 20;

/// Value convention for binary variables.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Domain {
    /// Outcomes 0 and 1.
    #[serde(rename = "01")]
    ZeroOne,
    /// Outcomes -1 and +1.
    #[serde(rename = "pm")]
    PlusMinus,
}

impl Domain {
    /// Numeric value carried by an atom bit under this convention.
    pub fn value(self, bit: u8) -> f64 {
        match self {
            Domain::ZeroOne => bit as f64,
            Domain::PlusMinus => {
                if bit == 1 {
                    1.0
                } else {
                    -1.0
                }
            }
        }
    }

    /// Maps a domain value (0/1 or -1/+1) to its bit encoding.
    pub fn bit_for(self, value: i8) -> Result<u8> {
        match (self, value) {
            (Domain::ZeroOne, 0) | (Domain::PlusMinus, -1) => Ok(0),
            (Domain::ZeroOne, 1) | (Domain::PlusMinus, 1) => Ok(1),
            _ => Err(Error::InvalidValue(format!(
                "{value} is not in the {} domain",
                self.label()
            ))),
        }
    }

    /// Short label used in messages and serialization ("01" or "pm").
    pub fn label(self) -> &'static str {
        match self {
            Domain::ZeroOne => "01",
            Domain::PlusMinus => "pm",
        }
    }
}

/// An ordered list of distinct variable names together with their value
/// convention. The order defines atom bit indexing (first variable = most
/// significant bit).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VariableSet {
    names: Vec<String>,
    domain: Domain,
}

impl VariableSet {
    /// Builds a variable set, rejecting duplicate or empty names.
    pub fn new<I, S>(names: I, domain: Domain) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        if names.len() > MAX_VARIABLES {
            return Err(Error::InvalidVariables(format!(
                "{} variables exceed the supported maximum of {MAX_VARIABLES}",
                names.len()
            )));
        }
        for (i, name) in names.iter().enumerate() {
            if name.is_empty() {
                return Err(Error::InvalidVariables("empty variable name".into()));
            }
            if names[..i].contains(name) {
                return Err(Error::InvalidVariables(format!("duplicate name `{name}`")));
            }
        }
        Ok(VariableSet { names, domain })
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    /// Number of atoms (outcome assignments): `2^n`.
    pub fn atom_count(&self) -> usize {
        1usize << self.names.len()
    }

    pub fn contains(&self, name: &str) -> bool {
        self.names.iter().any(|n| n == name)
    }

    /// Position of a variable in the canonical order.
    pub fn index_of(&self, name: &str) -> Result<usize> {
        self.names
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| Error::UnknownVariable(name.to_string()))
    }

    /// Encodes a monomial (a set of variables) as a bitmask in variable-index
    /// space: bit `i` set means the i-th variable participates.
    pub fn mask_of<S: AsRef<str>>(&self, monomial: &[S]) -> Result<u32> {
        let mut mask = 0u32;
        for name in monomial {
            let i = self.index_of(name.as_ref())?;
            if mask >> i & 1 == 1 {
                return Err(Error::InvalidVariables(format!(
                    "variable `{}` repeated in monomial",
                    name.as_ref()
                )));
            }
            mask |= 1 << i;
        }
        Ok(mask)
    }

    /// Names of the variables selected by a monomial mask, in canonical order.
    pub fn monomial_names(&self, mask: u32) -> Vec<&str> {
        (0..self.names.len())
            .filter(|i| mask >> i & 1 == 1)
            .map(|i| self.names[i].as_str())
            .collect()
    }

    /// Same-domain copy with a different convention tag.
    fn with_domain(&self, domain: Domain) -> VariableSet {
        VariableSet { names: self.names.clone(), domain }
    }
}

/// One outcome assignment: a bit per variable, bit 1 meaning "yes".
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Atom {
    bits: Vec<u8>,
}

impl Atom {
    /// Decodes an atom index (most significant bit = first variable).
    pub fn from_index(index: usize, n: usize) -> Atom {
        let bits = (0..n).map(|i| (index >> (n - 1 - i)) as u8 & 1).collect();
        Atom { bits }
    }

    /// Encodes the atom back to its table index.
    pub fn index(&self) -> usize {
        self.bits
            .iter()
            .fold(0usize, |acc, &b| (acc << 1) | b as usize)
    }

    pub fn bits(&self) -> &[u8] {
        &self.bits
    }

    pub fn bit(&self, position: usize) -> u8 {
        self.bits[position]
    }

    /// Numeric value of one variable under a convention.
    pub fn value(&self, position: usize, domain: Domain) -> f64 {
        domain.value(self.bits[position])
    }

    /// Compact `0`/`1` bit string (first variable leftmost).
    pub fn bit_string(&self) -> String {
        self.bits.iter().map(|b| char::from(b'0' + b)).collect()
    }
}

/// Bit of variable `position` inside an atom table index.
#[inline]
pub(crate) fn atom_bit(index: usize, position: usize, n: usize) -> u32 {
    (index >> (n - 1 - position)) as u32 & 1
}

/// Variable-index bitmask of the atom at `index` (bit i set ⇔ variable i is 1).
#[inline]
pub(crate) fn atom_varmask(index: usize, n: usize) -> u32 {
    let mut mask = 0u32;
    for i in 0..n {
        mask |= atom_bit(index, i, n) << i;
    }
    mask
}

/// Atom table index of the assignment described by a variable-index bitmask.
#[inline]
pub(crate) fn varmask_index(mask: u32, n: usize) -> usize {
    let mut index = 0usize;
    for i in 0..n {
        index |= (((mask >> i) & 1) as usize) << (n - 1 - i);
    }
    index
}

/// Coefficient of one atom in the expectation of a monomial: the product of
/// the participating variables' values at that atom.
#[inline]
pub(crate) fn monomial_coeff(domain: Domain, monomial_mask: u32, atom_varmask: u32) -> f64 {
    match domain {
        Domain::ZeroOne => {
            if atom_varmask & monomial_mask == monomial_mask {
                1.0
            } else {
                0.0
            }
        }
        Domain::PlusMinus => {
            if (monomial_mask & !atom_varmask).count_ones() % 2 == 0 {
                1.0
            } else {
                -1.0
            }
        }
    }
}

/// A probability table over the `2^n` atoms of `n` binary variables.
///
/// Weights are non-negative (within the global tolerance) and sum to one
/// (within the global tolerance); both invariants are re-validated by every
/// constructor.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "DistributionRepr", into = "DistributionRepr")]
pub struct Distribution {
    vars: VariableSet,
    weights: Vec<f64>,
}

/// Serialized form: `{"vars": [...], "domain": "01"|"pm", "weights": [...]}`
/// with weights in atom order.
#[derive(Clone, Serialize, Deserialize)]
struct DistributionRepr {
    vars: Vec<String>,
    domain: Domain,
    weights: Vec<f64>,
}

impl From<Distribution> for DistributionRepr {
    fn from(d: Distribution) -> Self {
        DistributionRepr {
            vars: d.vars.names.clone(),
            domain: d.vars.domain,
            weights: d.weights,
        }
    }
}

impl TryFrom<DistributionRepr> for Distribution {
    type Error = Error;

    fn try_from(r: DistributionRepr) -> Result<Self> {
        Distribution::new(VariableSet::new(r.vars, r.domain)?, r.weights)
    }
}

impl Distribution {
    /// Validates and wraps a weight table.
    pub fn new(vars: VariableSet, weights: Vec<f64>) -> Result<Self> {
        if weights.len() != vars.atom_count() {
            return Err(Error::InvalidDistribution(format!(
                "{} weights for {} atoms",
                weights.len(),
                vars.atom_count()
            )));
        }
        let d = Distribution { vars, weights };
        d.validate()?;
        Ok(d)
    }

    /// Uniform distribution over all atoms.
    pub fn uniform(vars: VariableSet) -> Distribution {
        let w = 1.0 / vars.atom_count() as f64;
        Distribution { weights: vec![w; vars.atom_count()], vars }
    }

    /// Builds a distribution by evaluating a weight function on every atom.
    pub fn from_fn(vars: VariableSet, f: impl Fn(&Atom) -> f64) -> Result<Distribution> {
        let n = vars.len();
        let weights = (0..vars.atom_count())
            .map(|i| f(&Atom::from_index(i, n)))
            .collect();
        Distribution::new(vars, weights)
    }

    fn validate(&self) -> Result<()> {
        let tol = tolerance();
        let mut sum = 0.0;
        for (i, &w) in self.weights.iter().enumerate() {
            if !w.is_finite() || w < -tol {
                return Err(Error::InvalidDistribution(format!(
                    "weight {w} at atom {i}"
                )));
            }
            sum += w;
        }
        if (sum - 1.0).abs() > tol {
            return Err(Error::InvalidDistribution(format!(
                "weights sum to {sum}"
            )));
        }
        Ok(())
    }

    pub fn vars(&self) -> &VariableSet {
        &self.vars
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn weight(&self, atom_index: usize) -> f64 {
        self.weights[atom_index]
    }

    /// Iterates atoms together with their weights.
    pub fn atoms(&self) -> impl Iterator<Item = (Atom, f64)> + '_ {
        let n = self.vars.len();
        self.weights
            .iter()
            .enumerate()
            .map(move |(i, &w)| (Atom::from_index(i, n), w))
    }

    /// Expectation of the product of the given variables' values; the empty
    /// monomial yields the total mass (1 for any valid distribution).
    pub fn moment<S: AsRef<str>>(&self, monomial: &[S]) -> Result<f64> {
        Ok(self.moment_mask(self.vars.mask_of(monomial)?))
    }

    /// Moment by monomial bitmask in variable-index space.
    pub fn moment_mask(&self, mask: u32) -> f64 {
        let n = self.vars.len();
        let domain = self.vars.domain;
        let mut acc = 0.0;
        for (i, &w) in self.weights.iter().enumerate() {
            acc += w * monomial_coeff(domain, mask, atom_varmask(i, n));
        }
        acc
    }

    /// Sums out every variable not in `keep`. The result keeps this
    /// distribution's canonical variable order restricted to `keep`.
    pub fn marginalize<S: AsRef<str>>(&self, keep: &[S]) -> Result<Distribution> {
        let mask = self.vars.mask_of(keep)?;
        let n = self.vars.len();
        let positions: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
        let k = positions.len();
        let names: Vec<String> = positions.iter().map(|&i| self.vars.names[i].clone()).collect();
        let mut weights = vec![0.0; 1usize << k];
        for (idx, &w) in self.weights.iter().enumerate() {
            let mut kidx = 0usize;
            for (j, &pos) in positions.iter().enumerate() {
                kidx |= (atom_bit(idx, pos, n) as usize) << (k - 1 - j);
            }
            weights[kidx] += w;
        }
        Distribution::new(VariableSet::new(names, self.vars.domain)?, weights)
    }

    /// Reorders the variables; `order` must be a permutation of the names.
    pub fn reorder<S: AsRef<str>>(&self, order: &[S]) -> Result<Distribution> {
        let n = self.vars.len();
        if order.len() != n {
            return Err(Error::InvalidVariables(format!(
                "reorder list has {} names, distribution has {n}",
                order.len()
            )));
        }
        let mut positions = Vec::with_capacity(n);
        let mut seen = 0u32;
        for name in order {
            let i = self.vars.index_of(name.as_ref())?;
            if seen >> i & 1 == 1 {
                return Err(Error::InvalidVariables(format!(
                    "duplicate name `{}` in reorder list",
                    name.as_ref()
                )));
            }
            seen |= 1 << i;
            positions.push(i);
        }
        let names: Vec<String> = positions.iter().map(|&i| self.vars.names[i].clone()).collect();
        let mut weights = vec![0.0; self.weights.len()];
        for (idx, &w) in self.weights.iter().enumerate() {
            let mut new_idx = 0usize;
            for (j, &pos) in positions.iter().enumerate() {
                new_idx |= (atom_bit(idx, pos, n) as usize) << (n - 1 - j);
            }
            weights[new_idx] = w;
        }
        Distribution::new(VariableSet::new(names, self.vars.domain)?, weights)
    }

    /// Marginalizes onto exactly the given variable set (same domain),
    /// reordered to its canonical order — convenient for comparing against a
    /// reference distribution atom by atom.
    pub fn marginal_onto(&self, target: &VariableSet) -> Result<Distribution> {
        if target.domain != self.vars.domain {
            return Err(Error::DomainMismatch(format!(
                "marginal requested in {} convention from a {} distribution",
                target.domain.label(),
                self.vars.domain.label()
            )));
        }
        self.marginalize(target.names())?.reorder(target.names())
    }

    /// Conditions on a partial outcome assignment and renormalizes. If the
    /// conditioning event has probability at most the global tolerance, the
    /// uniform distribution over the remaining variables is returned.
    pub fn condition(&self, fixed: &[(&str, i8)]) -> Result<Distribution> {
        let n = self.vars.len();
        let mut fixed_mask = 0u32;
        let mut fixed_bits = 0u32;
        for &(name, value) in fixed {
            let i = self.vars.index_of(name)?;
            if fixed_mask >> i & 1 == 1 {
                return Err(Error::InvalidVariables(format!(
                    "variable `{name}` fixed twice"
                )));
            }
            fixed_mask |= 1 << i;
            if self.vars.domain.bit_for(value)? == 1 {
                fixed_bits |= 1 << i;
            }
        }
        let rest: Vec<usize> = (0..n).filter(|i| fixed_mask >> i & 1 == 0).collect();
        let names: Vec<String> = rest.iter().map(|&i| self.vars.names[i].clone()).collect();
        let rest_vars = VariableSet::new(names, self.vars.domain)?;

        let matches = |idx: usize| -> bool {
            atom_varmask(idx, n) & fixed_mask == fixed_bits
        };
        let event: f64 = (0..self.weights.len())
            .filter(|&i| matches(i))
            .map(|i| self.weights[i])
            .sum();
        if event <= tolerance() {
            return Ok(Distribution::uniform(rest_vars));
        }
        let k = rest.len();
        let mut weights = vec![0.0; 1usize << k];
        for ridx in 0..weights.len() {
            let mut idx_mask = fixed_bits;
            for (j, &pos) in rest.iter().enumerate() {
                idx_mask |= ((ridx >> (k - 1 - j)) as u32 & 1) << pos;
            }
            weights[ridx] = self.weights[varmask_index(idx_mask, n)] / event;
        }
        Distribution::new(rest_vars, weights)
    }

    /// Relabels outcomes between the two conventions. The bit encoding pairs
    /// outcome 1 with +1, so the weight table is unchanged and the
    /// conversion is an involution.
    pub fn convert_domain(&self, target: Domain) -> Distribution {
        Distribution {
            vars: self.vars.with_domain(target),
            weights: self.weights.clone(),
        }
    }

    /// All `2^n - 1` non-empty moments of this distribution.
    pub fn full_moments(&self) -> MomentConstraints {
        let mut m = MomentConstraints::new(self.vars.clone());
        for mask in 1..(1u32 << self.vars.len()) {
            m.insert_mask(mask, self.moment_mask(mask))
                .expect("moments of a valid distribution are in range");
        }
        m
    }

    /// Largest absolute weight difference; requires identical variable sets
    /// (same names, order, and domain).
    pub fn max_abs_diff(&self, other: &Distribution) -> Result<f64> {
        if self.vars != other.vars {
            return Err(Error::DomainMismatch(
                "distributions are over different variable sets".into(),
            ));
        }
        Ok(self
            .weights
            .iter()
            .zip(&other.weights)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max))
    }
}

/// A partial assignment of expectation values to monomials over a fixed
/// variable set.
#[derive(Clone, Debug, PartialEq)]
pub struct MomentConstraints {
    vars: VariableSet,
    entries: BTreeMap<u32, f64>,
}

impl MomentConstraints {
    pub fn new(vars: VariableSet) -> Self {
        MomentConstraints { vars, entries: BTreeMap::new() }
    }

    pub fn vars(&self) -> &VariableSet {
        &self.vars
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// True when every non-empty monomial has a value.
    pub fn is_full(&self) -> bool {
        self.entries.len() == self.vars.atom_count() - 1
    }

    /// Records the expectation of a monomial. The empty monomial is accepted
    /// only with value 1 and is not stored. Values must lie in the domain's
    /// moment range (within tolerance).
    pub fn insert<S: AsRef<str>>(&mut self, monomial: &[S], value: f64) -> Result<()> {
        let mask = self.vars.mask_of(monomial)?;
        self.insert_mask(mask, value)
    }

    /// [`insert`](Self::insert) by monomial bitmask.
    pub fn insert_mask(&mut self, mask: u32, value: f64) -> Result<()> {
        let tol = tolerance();
        if mask == 0 {
            if (value - 1.0).abs() > tol {
                return Err(Error::InvalidMoments(format!(
                    "empty monomial must have expectation 1, got {value}"
                )));
            }
            return Ok(());
        }
        let lo = match self.vars.domain {
            Domain::ZeroOne => 0.0,
            Domain::PlusMinus => -1.0,
        };
        if !value.is_finite() || value < lo - tol || value > 1.0 + tol {
            return Err(Error::InvalidMoments(format!(
                "<{}> = {value} outside [{lo}, 1]",
                self.vars.monomial_names(mask).join(" ")
            )));
        }
        self.entries.insert(mask, value);
        Ok(())
    }

    pub fn get<S: AsRef<str>>(&self, monomial: &[S]) -> Result<Option<f64>> {
        Ok(self.get_mask(self.vars.mask_of(monomial)?))
    }

    pub fn get_mask(&self, mask: u32) -> Option<f64> {
        if mask == 0 {
            return Some(1.0);
        }
        self.entries.get(&mask).copied()
    }

    /// Iterates `(monomial mask, value)` pairs in mask order.
    pub fn iter(&self) -> impl Iterator<Item = (u32, f64)> + '_ {
        self.entries.iter().map(|(&m, &v)| (m, v))
    }

    /// Names of a monomial, in canonical variable order.
    pub fn monomial_names(&self, mask: u32) -> Vec<&str> {
        self.vars.monomial_names(mask)
    }

    /// Re-expresses the moments in the `{0,1}` convention via
    /// `<prod a_i> = 2^-|S| * sum over subsets T of S of <prod s_i over T>`.
    /// Every subset of every present monomial must itself be present.
    pub fn to_zero_one(&self) -> Result<MomentConstraints> {
        if self.vars.domain == Domain::ZeroOne {
            return Ok(self.clone());
        }
        let mut out = MomentConstraints::new(self.vars.with_domain(Domain::ZeroOne));
        for (&mask, _) in &self.entries {
            let mut sum = 0.0;
            let mut sub = mask;
            loop {
                let value = self.get_mask(sub).ok_or_else(|| {
                    Error::IncompleteMoments(format!(
                        "<{}> needed to convert <{}>",
                        self.vars.monomial_names(sub).join(" "),
                        self.vars.monomial_names(mask).join(" ")
                    ))
                })?;
                sum += value;
                if sub == 0 {
                    break;
                }
                sub = (sub - 1) & mask;
            }
            let scaled = sum / (1u64 << mask.count_ones()) as f64;
            out.entries.insert(mask, scaled);
        }
        Ok(out)
    }
}

/// Reconstructs the unique distribution with the given full moment set.
///
/// Works in either convention (a `{-1,+1}` set is converted internally).
/// For `{0,1}` moments the weight of the atom with support `T` is the
/// inclusion–exclusion sum over supersets `S ⊇ T` of `(-1)^(|S|-|T|) m(S)`.
pub fn moments_to_distribution(m: &MomentConstraints) -> Result<Distribution> {
    let n = m.vars().len();
    let full = (1u32 << n) - 1;
    for mask in 1..=full {
        if m.get_mask(mask).is_none() {
            return Err(Error::IncompleteMoments(format!(
                "<{}>",
                m.vars().monomial_names(mask).join(" ")
            )));
        }
    }
    match m.vars().domain() {
        Domain::ZeroOne => invert_zero_one(m),
        Domain::PlusMinus => {
            let d = invert_zero_one(&m.to_zero_one()?)?;
            Ok(d.convert_domain(Domain::PlusMinus))
        }
    }
}

fn invert_zero_one(m: &MomentConstraints) -> Result<Distribution> {
    let n = m.vars().len();
    let full = (1u32 << n) - 1;
    let tol = tolerance();
    let mut weights = vec![0.0; 1usize << n];
    for support in 0..=full {
        let complement = full & !support;
        let mut weight = 0.0;
        let mut extra = complement;
        loop {
            let s = support | extra;
            let value = m.get_mask(s).expect("completeness checked by caller");
            if (s.count_ones() - support.count_ones()) % 2 == 0 {
                weight += value;
            } else {
                weight -= value;
            }
            if extra == 0 {
                break;
            }
            extra = (extra - 1) & complement;
        }
        if weight < -tol {
            return Err(Error::NotRealizable(format!(
                "atom {} gets weight {weight}",
                Atom::from_index(varmask_index(support, n), n).bit_string()
            )));
        }
        weights[varmask_index(support, n)] = weight;
    }
    Distribution::new(m.vars().clone(), weights)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::test_util::solve_linear;
    use approx::assert_abs_diff_eq;
    use rand::Rng;

    fn vars(names: &[&str], domain: Domain) -> VariableSet {
        VariableSet::new(names.iter().copied(), domain).unwrap()
    }

    fn uniform2() -> Distribution {
        Distribution::uniform(vars(&["A", "B"], Domain::ZeroOne))
    }

    #[test]
    fn atom_index_round_trip() {
        for n in 0..=4 {
            for idx in 0..(1usize << n) {
                let atom = Atom::from_index(idx, n);
                assert_eq!(atom.index(), idx);
                assert_eq!(varmask_index(atom_varmask(idx, n), n), idx);
            }
        }
    }

    #[test]
    fn first_variable_is_most_significant_bit() {
        let atom = Atom::from_index(0b10, 2);
        assert_eq!(atom.bits(), &[1, 0]);
        assert_eq!(atom.bit_string(), "10");
    }

    #[test]
    fn variable_set_rejects_duplicates() {
        assert!(VariableSet::new(["A", "A"], Domain::ZeroOne).is_err());
    }

    #[test]
    fn moment_of_independent_fair_bits() {
        let d = uniform2();
        assert_abs_diff_eq!(d.moment(&["A", "B"]).unwrap(), 0.25, epsilon = 1e-12);
    }

    #[test]
    fn empty_monomial_is_normalization() {
        let d = uniform2();
        let empty: [&str; 0] = [];
        assert_abs_diff_eq!(d.moment(&empty).unwrap(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn moment_unknown_variable_errors() {
        let d = uniform2();
        assert!(matches!(
            d.moment(&["C"]),
            Err(Error::UnknownVariable(name)) if name == "C"
        ));
    }

    #[test]
    fn marginalize_uniform_pair() {
        let d = uniform2();
        let m = d.marginalize(&["A"]).unwrap();
        assert_eq!(m.vars().names(), ["A"]);
        assert_abs_diff_eq!(m.weight(0), 0.5, epsilon = 1e-12);
        assert_abs_diff_eq!(m.weight(1), 0.5, epsilon = 1e-12);
    }

    #[test]
    fn marginalize_everything_is_identity() {
        let d = Distribution::new(
            vars(&["A", "B"], Domain::ZeroOne),
            vec![0.1, 0.2, 0.3, 0.4],
        )
        .unwrap();
        let m = d.marginalize(&["A", "B"]).unwrap();
        assert_eq!(m, d);
    }

    #[test]
    fn marginalize_preserves_normalization() {
        let d = Distribution::new(
            vars(&["A", "B", "C"], Domain::PlusMinus),
            vec![0.05, 0.1, 0.15, 0.2, 0.25, 0.05, 0.1, 0.1],
        )
        .unwrap();
        let m = d.marginalize(&["B"]).unwrap();
        assert_abs_diff_eq!(m.weights().iter().sum::<f64>(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn reorder_permutes_atoms() {
        let d = Distribution::new(
            vars(&["A", "B"], Domain::ZeroOne),
            vec![0.1, 0.2, 0.3, 0.4],
        )
        .unwrap();
        let r = d.reorder(&["B", "A"]).unwrap();
        assert_eq!(r.vars().names(), ["B", "A"]);
        // atom (A=0,B=1) has weight 0.2 and becomes (B=1,A=0) = index 0b10
        assert_abs_diff_eq!(r.weight(0b10), 0.2, epsilon = 1e-15);
        assert_abs_diff_eq!(r.weight(0b01), 0.3, epsilon = 1e-15);
        let back = r.reorder(&["A", "B"]).unwrap();
        assert_eq!(back, d);
    }

    #[test]
    fn condition_uniform_pair() {
        let d = uniform2();
        let c = d.condition(&[("A", 1)]).unwrap();
        assert_eq!(c.vars().names(), ["B"]);
        assert_abs_diff_eq!(c.weight(0), 0.5, epsilon = 1e-12);
    }

    #[test]
    fn condition_on_null_event_returns_uniform() {
        let d = Distribution::new(
            vars(&["A", "B"], Domain::ZeroOne),
            vec![0.5, 0.5, 0.0, 0.0],
        )
        .unwrap();
        let c = d.condition(&[("A", 1)]).unwrap();
        assert_abs_diff_eq!(c.weight(0), 0.5, epsilon = 1e-12);
        assert_abs_diff_eq!(c.weight(1), 0.5, epsilon = 1e-12);
    }

    #[test]
    fn condition_rejects_value_outside_domain() {
        let d = uniform2();
        assert!(matches!(d.condition(&[("A", -1)]), Err(Error::InvalidValue(_))));
    }

    #[test]
    fn convert_domain_keeps_weights_and_round_trips() {
        let d = Distribution::new(
            vars(&["A", "B"], Domain::PlusMinus),
            vec![0.25; 4],
        )
        .unwrap();
        let c = d.convert_domain(Domain::ZeroOne);
        assert_eq!(c.weights(), d.weights());
        // fair ±1 pair has <AB> = 0; as {0,1} variables the moment is 1/4
        assert_abs_diff_eq!(d.moment(&["A", "B"]).unwrap(), 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(c.moment(&["A", "B"]).unwrap(), 0.25, epsilon = 1e-12);
        assert_eq!(c.convert_domain(Domain::PlusMinus), d);
        assert_eq!(d.convert_domain(Domain::PlusMinus), d);
    }

    #[test]
    fn inversion_recovers_uniform_pair() {
        let mut m = MomentConstraints::new(vars(&["A", "B"], Domain::ZeroOne));
        m.insert(&["A"], 0.5).unwrap();
        m.insert(&["B"], 0.5).unwrap();
        m.insert(&["A", "B"], 0.25).unwrap();
        let d = moments_to_distribution(&m).unwrap();
        for i in 0..4 {
            assert_abs_diff_eq!(d.weight(i), 0.25, epsilon = 1e-12);
        }
    }

    #[test]
    fn inversion_flags_unrealizable_moments() {
        let mut m = MomentConstraints::new(vars(&["A", "B"], Domain::ZeroOne));
        m.insert(&["A"], 0.5).unwrap();
        m.insert(&["B"], 0.5).unwrap();
        m.insert(&["A", "B"], 0.6).unwrap();
        // atom A=1,B=0 would get weight 0.5 - 0.6 = -0.1
        assert!(matches!(
            moments_to_distribution(&m),
            Err(Error::NotRealizable(_))
        ));
    }

    #[test]
    fn inversion_requires_all_monomials() {
        let mut m = MomentConstraints::new(vars(&["A", "B"], Domain::ZeroOne));
        m.insert(&["A"], 0.5).unwrap();
        m.insert(&["B"], 0.5).unwrap();
        assert!(matches!(
            moments_to_distribution(&m),
            Err(Error::IncompleteMoments(_))
        ));
    }

    #[test]
    fn inversion_matches_linear_solve_oracle() {
        // Independent check of the inclusion–exclusion formula: solve the
        // full linear system "moments of d = m" directly.
        let mut rng = crate::sampling::rng(41);
        for n in 1..=4usize {
            for _ in 0..25 {
                let vs = VariableSet::new((0..n).map(|i| format!("V{i}")), Domain::ZeroOne)
                    .unwrap();
                let d = crate::sampling::random_distribution(&mut rng, vs.clone());
                let m = d.full_moments();
                let size = 1usize << n;
                let mut a = vec![vec![0.0; size]; size];
                let mut b = vec![0.0; size];
                a[0] = vec![1.0; size];
                b[0] = 1.0;
                for (row, (mask, value)) in m.iter().enumerate() {
                    for idx in 0..size {
                        a[row + 1][idx] =
                            monomial_coeff(Domain::ZeroOne, mask, atom_varmask(idx, n));
                    }
                    b[row + 1] = value;
                }
                let solved = solve_linear(a, b).expect("moment system is nonsingular");
                let inverted = moments_to_distribution(&m).unwrap();
                for idx in 0..size {
                    assert_abs_diff_eq!(inverted.weight(idx), solved[idx], epsilon = 1e-9);
                    assert_abs_diff_eq!(inverted.weight(idx), d.weight(idx), epsilon = 1e-9);
                }
            }
        }
    }

    #[test]
    fn round_trip_in_plus_minus_convention() {
        let mut rng = crate::sampling::rng(42);
        for _ in 0..50 {
            let vs = vars(&["A", "B", "C"], Domain::PlusMinus);
            let d = crate::sampling::random_distribution(&mut rng, vs);
            let m = d.full_moments();
            let back = moments_to_distribution(&m).unwrap();
            assert!(back.max_abs_diff(&d).unwrap() <= 1e-9);
            for (mask, value) in m.iter() {
                assert_abs_diff_eq!(back.moment_mask(mask), value, epsilon = 1e-9);
            }
        }
    }

    #[test]
    fn marginalize_commutes_with_moment() {
        let mut rng = crate::sampling::rng(43);
        for _ in 0..50 {
            let vs = vars(&["A", "B", "C", "D"], Domain::ZeroOne);
            let d = crate::sampling::random_distribution(&mut rng, vs);
            let m = d.marginalize(&["A", "C"]).unwrap();
            for monomial in [vec!["A"], vec!["C"], vec!["A", "C"]] {
                assert_abs_diff_eq!(
                    m.moment(&monomial).unwrap(),
                    d.moment(&monomial).unwrap(),
                    epsilon = 1e-12
                );
            }
        }
    }

    #[test]
    fn moment_constraints_reject_out_of_range() {
        let mut m = MomentConstraints::new(vars(&["A"], Domain::ZeroOne));
        assert!(m.insert(&["A"], -0.5).is_err());
        assert!(m.insert(&["A"], 1.5).is_err());
        let mut p = MomentConstraints::new(vars(&["A"], Domain::PlusMinus));
        assert!(p.insert(&["A"], -0.5).is_ok());
        assert!(p.insert(&["A"], -1.5).is_err());
    }

    #[test]
    fn distribution_serde_round_trip() {
        let d = Distribution::new(
            vars(&["A", "B"], Domain::PlusMinus),
            vec![0.1, 0.2, 0.3, 0.4],
        )
        .unwrap();
        let json = serde_json::to_string(&d).unwrap();
        assert!(json.contains("\"pm\""));
        let back: Distribution = serde_json::from_str(&json).unwrap();
        assert_eq!(back, d);
        let bad = r#"{"vars":["A"],"domain":"01","weights":[0.5,0.9]}"#;
        assert!(serde_json::from_str::<Distribution>(bad).is_err());
    }

    #[test]
    fn random_weights_are_a_distribution() {
        let mut rng = crate::sampling::rng(44);
        for _ in 0..10 {
            let vs = vars(&["X", "Y", "Z"], Domain::ZeroOne);
            let d = crate::sampling::random_distribution(&mut rng, vs);
            let total: f64 = d.weights().iter().sum();
            assert_abs_diff_eq!(total, 1.0, epsilon = 1e-12);
            assert!(d.weights().iter().all(|&w| w >= 0.0));
        }
        // plain Rng usage keeps the helper generic
        let mut r2 = crate::sampling::rng(45);
        let _ = r2.random_range(0..10usize);
    }
}
