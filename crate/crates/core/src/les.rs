//! Dimension chasing through long exact cohomology sequences.
//!
//! Every `h^q` of every named sheaf and the rank of every map in every long
//! exact sequence is an unknown. Exactness gives `dim V_k = r_{k-1} + r_k`,
//! and all unknowns are non-negative integers. Linear consequences are found
//! by exact elimination; non-negativity is used to force all terms of a
//! same-sign relation with zero right-hand side to vanish.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::intersection::{kunneth_cohomology, BundleSum};

/// Cohomological degrees tracked for every term.
pub const LEVELS: usize = 5;

const DEFAULT_JSON: &str = include_str!("../data/deformation_sequences.json");

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermSpec {
    pub name: String,
    pub space: String,
    /// Split bundle on X whose cohomology comes from Künneth.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bundle: Option<Vec<[i64; 4]>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ShortExact {
    pub sub: String,
    pub mid: String,
    pub quot: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Fact {
    pub term: String,
    pub q: usize,
    pub value: i64,
    pub anchor: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TargetEntry {
    pub term: String,
    pub q: usize,
    pub coeff: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Target {
    pub label: String,
    pub combination: Vec<TargetEntry>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LesDescription {
    pub spaces: BTreeMap<String, usize>,
    pub terms: Vec<TermSpec>,
    pub sequences: Vec<ShortExact>,
    #[serde(default)]
    pub facts: Vec<Fact>,
    #[serde(default)]
    pub targets: Vec<Target>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LesError {
    #[error("invalid sequence description: {0}")]
    Parse(String),
    #[error("unknown term {0:?}")]
    UnknownTerm(String),
    #[error("term {term:?} lives on unknown space {space:?}")]
    UnknownSpace { term: String, space: String },
    #[error("duplicate term {0:?}")]
    DuplicateTerm(String),
    #[error("cohomological degree {q} out of range for {term:?}")]
    DegreeOutOfRange { term: String, q: usize },
    #[error("inconsistent constraints: {0}")]
    Inconsistent(String),
}

impl LesDescription {
    pub fn parse(json: &str) -> Result<Self, LesError> {
        let de = &mut serde_json::Deserializer::from_str(json);
        serde_path_to_error::deserialize(de).map_err(|e| LesError::Parse(e.to_string()))
    }

    /// The shipped description of the deformation computation.
    pub fn deformation_default() -> Self {
        Self::parse(DEFAULT_JSON).expect("embedded sequence description is valid")
    }

    fn term_index(&self, name: &str) -> Result<usize, LesError> {
        self.terms
            .iter()
            .position(|t| t.name == name)
            .ok_or_else(|| LesError::UnknownTerm(name.to_string()))
    }

    fn validate(&self) -> Result<(), LesError> {
        let mut seen = BTreeSet::new();
        for t in &self.terms {
            if !seen.insert(&t.name) {
                return Err(LesError::DuplicateTerm(t.name.clone()));
            }
            if !self.spaces.contains_key(&t.space) {
                return Err(LesError::UnknownSpace {
                    term: t.name.clone(),
                    space: t.space.clone(),
                });
            }
        }
        for s in &self.sequences {
            for name in [&s.sub, &s.mid, &s.quot] {
                self.term_index(name)?;
            }
        }
        let entries = self
            .facts
            .iter()
            .map(|f| (&f.term, f.q))
            .chain(self.targets.iter().flat_map(|t| t.combination.iter().map(|e| (&e.term, e.q))));
        for (term, q) in entries {
            self.term_index(term)?;
            if q >= LEVELS {
                return Err(LesError::DegreeOutOfRange { term: term.clone(), q });
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TargetValue {
    pub label: String,
    pub value: Option<i64>,
    /// True when the combination is determined but some of its terms are not.
    pub combination_only: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LesSolution {
    /// `h^0..h^4` of every term, `None` where undetermined.
    pub dims: BTreeMap<String, [Option<i64>; LEVELS]>,
    pub targets: Vec<TargetValue>,
}

impl LesSolution {
    pub fn dim(&self, term: &str, q: usize) -> Option<i64> {
        self.dims.get(term).and_then(|row| row[q])
    }

    pub fn target(&self, label: &str) -> Option<i64> {
        self.targets.iter().find(|t| t.label == label).and_then(|t| t.value)
    }
}

#[derive(Clone)]
struct Row {
    coeffs: Vec<BigRational>,
    rhs: BigRational,
}

fn int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

struct Chase<'a> {
    desc: &'a LesDescription,
    n: usize,
}

impl Chase<'_> {
    fn dim_var(&self, term: usize, q: usize) -> usize {
        term * LEVELS + q
    }

    fn rank_var(&self, seq: usize, k: usize) -> usize {
        self.desc.terms.len() * LEVELS + seq * (3 * LEVELS - 1) + k
    }

    fn var_name(&self, v: usize) -> String {
        let dims = self.desc.terms.len() * LEVELS;
        if v < dims {
            format!("h{}({})", v % LEVELS, self.desc.terms[v / LEVELS].name)
        } else {
            let (s, k) = ((v - dims) / (3 * LEVELS - 1), (v - dims) % (3 * LEVELS - 1));
            format!("rank of map {k} in sequence {}", s + 1)
        }
    }

    fn row(&self, entries: &[(usize, i64)], rhs: i64) -> Row {
        let mut coeffs = vec![BigRational::zero(); self.n];
        for &(v, c) in entries {
            coeffs[v] += int(c);
        }
        Row { coeffs, rhs: int(rhs) }
    }

    fn describe(&self, row: &Row) -> String {
        let lhs: Vec<String> = row
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(v, c)| format!("{c}*{}", self.var_name(v)))
            .collect();
        format!("{} = {}", if lhs.is_empty() { "0".to_string() } else { lhs.join(" + ") }, row.rhs)
    }

    fn initial_rows(&self) -> Result<Vec<Row>, LesError> {
        let mut rows = Vec::new();
        for (t, spec) in self.desc.terms.iter().enumerate() {
            let dim = self.desc.spaces[&spec.space];
            for q in (dim + 1)..LEVELS {
                rows.push(self.row(&[(self.dim_var(t, q), 1)], 0));
            }
            if let Some(summands) = &spec.bundle {
                let h = kunneth_cohomology(&BundleSum {
                    summands: summands.clone(),
                });
                for (q, &value) in h.iter().enumerate() {
                    rows.push(self.row(&[(self.dim_var(t, q), 1)], value));
                }
            }
        }
        for (s, seq) in self.desc.sequences.iter().enumerate() {
            let ids = [seq.sub.as_str(), seq.mid.as_str(), seq.quot.as_str()].map(|n| self.desc.term_index(n));
            let ids = [ids[0].clone()?, ids[1].clone()?, ids[2].clone()?];
            for k in 0..3 * LEVELS {
                let mut entries = vec![(self.dim_var(ids[k % 3], k / 3), 1)];
                if k > 0 {
                    entries.push((self.rank_var(s, k - 1), -1));
                }
                if k < 3 * LEVELS - 1 {
                    entries.push((self.rank_var(s, k), -1));
                }
                rows.push(self.row(&entries, 0));
            }
        }
        for f in &self.desc.facts {
            let t = self.desc.term_index(&f.term)?;
            rows.push(self.row(&[(self.dim_var(t, f.q), 1)], f.value));
        }
        Ok(rows)
    }

    /// Reduced row echelon form, dropping zero rows. Returns pivot columns alongside.
    fn rref(&self, rows: &[Row]) -> Result<Vec<(usize, Row)>, LesError> {
        let mut rows: Vec<Row> = rows.to_vec();
        let mut out: Vec<(usize, Row)> = Vec::new();
        let mut r = 0;
        for col in 0..self.n {
            let Some(p) = (r..rows.len()).find(|&i| !rows[i].coeffs[col].is_zero()) else {
                continue;
            };
            rows.swap(r, p);
            let inv = rows[r].coeffs[col].recip();
            for c in rows[r].coeffs.iter_mut() {
                *c *= &inv;
            }
            rows[r].rhs *= &inv;
            let pivot = rows[r].clone();
            for (i, row) in rows.iter_mut().enumerate() {
                if i == r || row.coeffs[col].is_zero() {
                    continue;
                }
                let f = row.coeffs[col].clone();
                for (c, pc) in row.coeffs.iter_mut().zip(&pivot.coeffs) {
                    if !pc.is_zero() {
                        *c -= &f * pc;
                    }
                }
                row.rhs -= &f * &pivot.rhs;
            }
            out.push((col, pivot));
            r += 1;
        }
        if let Some(bad) = rows[r..].iter().find(|row| !row.rhs.is_zero()) {
            return Err(LesError::Inconsistent(format!("elimination reached {}", self.describe(bad))));
        }
        for (i, (_, row)) in out.iter_mut().enumerate() {
            *row = rows[i].clone();
        }
        Ok(out)
    }

    /// Variables forced to zero by a same-sign relation.
    fn sign_rule(&self, row: &Row, forced: &mut BTreeSet<usize>) -> Result<bool, LesError> {
        let signs: BTreeSet<bool> = row.coeffs.iter().filter(|c| !c.is_zero()).map(|c| c.is_positive()).collect();
        if signs.len() != 1 {
            return Ok(false);
        }
        let positive = *signs.iter().next().expect("one sign");
        if !row.rhs.is_zero() && row.rhs.is_positive() != positive {
            return Err(LesError::Inconsistent(format!("non-negativity violated by {}", self.describe(row))));
        }
        if !row.rhs.is_zero() {
            return Ok(false);
        }
        let mut changed = false;
        for (v, c) in row.coeffs.iter().enumerate() {
            if !c.is_zero() {
                changed |= forced.insert(v);
            }
        }
        Ok(changed)
    }

    fn solve(&self) -> Result<Vec<(usize, Row)>, LesError> {
        let mut rows = self.initial_rows()?;
        let mut forced = BTreeSet::new();
        loop {
            let reduced = self.rref(&rows)?;
            let known: BTreeMap<usize, BigRational> = reduced
                .iter()
                .filter(|(_, r)| r.coeffs.iter().filter(|c| !c.is_zero()).count() == 1)
                .map(|(col, r)| (*col, r.rhs.clone()))
                .collect();
            let substituted = rows.iter().map(|row| {
                let mut row = row.clone();
                for (v, value) in &known {
                    let c = std::mem::take(&mut row.coeffs[*v]);
                    row.rhs -= c * value;
                }
                row
            });
            let mut changed = false;
            for row in reduced.iter().map(|(_, r)| r.clone()).chain(substituted) {
                changed |= self.sign_rule(&row, &mut forced)?;
            }
            if !changed {
                return Ok(reduced);
            }
            rows.retain(|r| !(r.rhs.is_zero() && r.coeffs.iter().filter(|c| !c.is_zero()).count() == 1));
            rows.extend(forced.iter().map(|&v| self.row(&[(v, 1)], 0)));
        }
    }

    /// Value of `Σ cᵥ xᵥ` if it lies in the row space.
    fn evaluate(&self, reduced: &[(usize, Row)], target: &[BigRational]) -> Option<BigRational> {
        let mut residual = target.to_vec();
        let mut value = BigRational::zero();
        for (col, row) in reduced {
            let f = residual[*col].clone();
            if f.is_zero() {
                continue;
            }
            for (c, rc) in residual.iter_mut().zip(&row.coeffs) {
                *c -= &f * rc;
            }
            value += &f * &row.rhs;
        }
        residual.iter().all(Zero::is_zero).then_some(value)
    }

    fn to_dimension(&self, value: BigRational, what: &str) -> Result<i64, LesError> {
        if !value.is_integer() {
            return Err(LesError::Inconsistent(format!("{what} would be {value}, not an integer")));
        }
        value
            .to_integer()
            .to_i64()
            .ok_or_else(|| LesError::Inconsistent(format!("{what} overflows")))
    }
}

/// Solve for every determined dimension and evaluate the description's targets.
pub fn les_chase(desc: &LesDescription) -> Result<LesSolution, LesError> {
    desc.validate()?;
    let n = desc.terms.len() * LEVELS + desc.sequences.len() * (3 * LEVELS - 1);
    let chase = Chase { desc, n };
    let reduced = chase.solve()?;

    let unit = |v: usize| -> Vec<BigRational> {
        let mut e = vec![BigRational::zero(); n];
        e[v] = int(1);
        e
    };
    let mut known = vec![None; n];
    for (v, slot) in known.iter_mut().enumerate() {
        if let Some(value) = chase.evaluate(&reduced, &unit(v)) {
            let d = chase.to_dimension(value, &chase.var_name(v))?;
            if d < 0 {
                return Err(LesError::Inconsistent(format!("{} would be {d}", chase.var_name(v))));
            }
            *slot = Some(d);
        }
    }

    let dims = desc
        .terms
        .iter()
        .enumerate()
        .map(|(t, spec)| (spec.name.clone(), std::array::from_fn(|q| known[chase.dim_var(t, q)])))
        .collect();

    let mut targets = Vec::new();
    for target in &desc.targets {
        let mut vec = vec![BigRational::zero(); n];
        let mut vars = Vec::new();
        for e in &target.combination {
            let v = chase.dim_var(desc.term_index(&e.term)?, e.q);
            vec[v] += int(e.coeff);
            vars.push(v);
        }
        let value = match chase.evaluate(&reduced, &vec) {
            Some(v) => Some(chase.to_dimension(v, &target.label)?),
            None => None,
        };
        let combination_only = value.is_some() && vars.iter().any(|&v| known[v].is_none());
        targets.push(TargetValue {
            label: target.label.clone(),
            value,
            combination_only,
        });
    }
    Ok(LesSolution { dims, targets })
}

/// Checks `Σ (-1)^k dim V_k = 0` for every sequence whose dimensions are all known.
pub fn alternating_sums_hold(desc: &LesDescription, sol: &LesSolution) -> bool {
    desc.sequences.iter().all(|s| {
        let mut total = 0;
        for q in 0..LEVELS {
            for (j, name) in [&s.sub, &s.mid, &s.quot].into_iter().enumerate() {
                let Some(d) = sol.dim(name, q) else { return true };
                total += if (3 * q + j) % 2 == 0 { d } else { -d };
            }
        }
        total == 0
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_description_chases_to_table_values() {
        let desc = LesDescription::deformation_default();
        let sol = les_chase(&desc).unwrap();
        let expected = [
            ("h0(O_Y(2H))", 80),
            ("h0(O_Y(H))", 16),
            ("h1(Theta_Y(-H))", 16),
            ("h1(Theta_Y)", 68),
            ("h2(Theta_Y)", 4),
            ("h1-h0(Theta_Y|T)", 52),
            ("h2(Theta_Y|T)", 4),
            ("h1(Theta_T)", 67),
            ("h2(Theta_T)", 3),
        ];
        for (label, value) in expected {
            assert_eq!(sol.target(label), Some(value), "{label}");
        }
        let partial = sol.targets.iter().find(|t| t.label == "h1-h0(Theta_Y|T)").unwrap();
        assert!(partial.combination_only);
        assert_eq!(sol.dim("Theta_Y|T", 0), None);
        assert_eq!(sol.dims["O_Y"], [Some(1), Some(0), Some(0), Some(1), Some(0)]);
        assert_eq!(sol.dims["O_T(H)"], [Some(15), Some(0), Some(1), Some(0), Some(0)]);
        assert_eq!(sol.dims["Theta_X|Y"], [Some(12), Some(0), Some(4), Some(0), Some(0)]);
        assert_eq!(sol.dim("Theta_Y(-H)", 3), Some(0));
        assert!(alternating_sums_hold(&desc, &sol));
    }

    #[test]
    fn contradictory_fact_is_reported() {
        let mut desc = LesDescription::deformation_default();
        desc.facts.push(Fact {
            term: "O_Y(2H)".into(),
            q: 0,
            value: 79,
            anchor: "wrong".into(),
        });
        assert!(matches!(les_chase(&desc), Err(LesError::Inconsistent(_))));
    }

    #[test]
    fn missing_vanishing_leaves_values_open() {
        let mut desc = LesDescription::deformation_default();
        desc.facts.retain(|f| f.term != "Theta_T");
        let sol = les_chase(&desc).unwrap();
        assert_eq!(sol.target("h2(Theta_T)"), Some(3));
        assert_eq!(sol.target("h1(Theta_T)"), None);
    }

    #[test]
    fn unknown_term_rejected() {
        let mut desc = LesDescription::deformation_default();
        desc.sequences[0].sub = "O_Z".into();
        assert_eq!(les_chase(&desc), Err(LesError::UnknownTerm("O_Z".into())));
    }

    #[test]
    fn parse_reports_path() {
        let err = LesDescription::parse(r#"{"spaces":{},"terms":[{"name":1}],"sequences":[]}"#).unwrap_err();
        assert!(err.to_string().contains("terms[0].name"), "{err}");
    }
}
