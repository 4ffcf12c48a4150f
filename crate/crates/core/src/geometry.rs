//! Fixed loci, the holomorphic Lefschetz sum, Jacobian smoothness tests, base
//! points of linear systems and the admissibility verdict for a pair
//! (section, group).

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::autos::{Point4, ProductAuto};
use crate::cyclo::CycloNum;
use crate::group::{closure, FiniteSubgroup, GroupError, DEFAULT_CAP};
use crate::linalg::ExactMatrix;
use crate::moebius::{fixed_points_p1, FixedPoints, Mat2, MoebiusError, P1Point, ProjMatrix};
use crate::multihomog::{eigenvalue_of, LiftedAuto, MultiPoly};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GeometryError {
    #[error(transparent)]
    Moebius(#[from] MoebiusError),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error("{element} has a positive-dimensional fixed locus")]
    PositiveDimensional { element: String },
    #[error("fixed point {point} of {element} is degenerate")]
    Degenerate { element: String, point: String },
    #[error("polynomial {index} does not vanish at {point}")]
    NotOnZeroLocus { index: usize, point: String },
}

pub fn point_string(p: &Point4) -> String {
    let parts: Vec<String> = p.iter().map(ToString::to_string).collect();
    format!("[{}]", parts.join(", "))
}

#[derive(Debug, Clone, PartialEq, Eq)]
#[allow(clippy::large_enum_variant)]
pub enum FixedComponent {
    IsolatedPoint {
        point: Point4,
        degenerate: bool,
    },
    /// `dimension` free cycles; `description` records the constraint on
    /// every cycle of the permutation.
    PositiveDim {
        dimension: usize,
        description: String,
    },
}

impl FixedComponent {
    pub fn dimension(&self) -> usize {
        match self {
            FixedComponent::IsolatedPoint { .. } => 0,
            FixedComponent::PositiveDim { dimension, .. } => *dimension,
        }
    }

    pub fn point(&self) -> Option<&Point4> {
        match self {
            FixedComponent::IsolatedPoint { point, .. } => Some(point),
            FixedComponent::PositiveDim { .. } => None,
        }
    }
}

impl fmt::Display for FixedComponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FixedComponent::IsolatedPoint { point, degenerate } => {
                write!(f, "{}", point_string(point))?;
                if *degenerate {
                    write!(f, " (degenerate)")?;
                }
                Ok(())
            }
            FixedComponent::PositiveDim { dimension, description } => write!(f, "dim {dimension}: {description}"),
        }
    }
}

enum CycleSolution {
    Free,
    Points(Vec<(P1Point, bool)>),
}

/// Solves `xᵢ = Aᵢ x_{σ(i)}` cycle by cycle.
pub fn fixed_locus(g: &ProductAuto) -> Result<Vec<FixedComponent>, GeometryError> {
    let cycles = g.perm.cycles();
    let mut solutions = Vec::with_capacity(cycles.len());
    for cycle in &cycles {
        // x_{c0} = A_{c0} A_{c1} ⋯ A_{c(k-1)} x_{c0}
        let composite = cycle.iter().fold(ProjMatrix::identity(), |acc, &c| &acc * &g.mats[c]);
        solutions.push(match fixed_points_p1(&composite)? {
            FixedPoints::AllOfP1 => CycleSolution::Free,
            FixedPoints::One(p) => CycleSolution::Points(vec![(p, true)]),
            FixedPoints::Two(ps) => CycleSolution::Points(ps.into_iter().map(|p| (p, false)).collect()),
        });
    }
    let free = solutions.iter().filter(|s| matches!(s, CycleSolution::Free)).count();
    if free > 0 {
        let parts: Vec<String> = cycles
            .iter()
            .zip(&solutions)
            .map(|(c, s)| {
                let name: String = c.iter().map(|i| (i + 1).to_string()).collect();
                match s {
                    CycleSolution::Free => format!("cycle ({name}) free"),
                    CycleSolution::Points(ps) => {
                        let pts: Vec<String> = ps.iter().map(|(p, _)| p.to_string()).collect();
                        format!("x{} in {{{}}}", c[0] + 1, pts.join(", "))
                    }
                }
            })
            .collect();
        return Ok(vec![FixedComponent::PositiveDim {
            dimension: free,
            description: parts.join("; "),
        }]);
    }
    let mut partial: Vec<([Option<P1Point>; 4], bool)> = vec![(Default::default(), false)];
    for (cycle, sol) in cycles.iter().zip(&solutions) {
        let CycleSolution::Points(ps) = sol else { unreachable!() };
        let mut next = Vec::new();
        for (slots, degen) in &partial {
            for (p, d) in ps {
                let mut slots = slots.clone();
                slots[cycle[0]] = Some(p.clone());
                // x_{c(k-1)} = A_{c(k-1)} x_{c0}, then backwards around the cycle
                let mut cur = p.clone();
                for &c in cycle[1..].iter().rev() {
                    cur = g.mats[c].apply(&cur);
                    slots[c] = Some(cur.clone());
                }
                next.push((slots, *degen || *d));
            }
        }
        partial = next;
    }
    let mut out: Vec<FixedComponent> = partial
        .into_iter()
        .map(|(slots, degenerate)| FixedComponent::IsolatedPoint {
            point: slots.map(|s| s.expect("every slot lies on a cycle")),
            degenerate,
        })
        .collect();
    out.sort_by(|a, b| a.point().cmp(&b.point()));
    Ok(out)
}

/// Fixed components of every nontrivial element, with the indices (into the
/// group's element list) of the elements fixing each isolated point.
pub fn group_fixed_locus(g: &FiniteSubgroup) -> Result<Vec<(FixedComponent, Vec<usize>)>, GeometryError> {
    let mut points: BTreeMap<Point4, (bool, Vec<usize>)> = BTreeMap::new();
    let mut positive = Vec::new();
    for (idx, elem) in g.elements().enumerate().skip(1) {
        for comp in fixed_locus(elem)? {
            match comp {
                FixedComponent::IsolatedPoint { point, degenerate } => {
                    let entry = points.entry(point).or_insert((false, Vec::new()));
                    entry.0 |= degenerate;
                    entry.1.push(idx);
                }
                other => positive.push((other, vec![idx])),
            }
        }
    }
    let mut out: Vec<(FixedComponent, Vec<usize>)> = points
        .into_iter()
        .map(|(point, (degenerate, stab))| (FixedComponent::IsolatedPoint { point, degenerate }, stab))
        .collect();
    out.extend(positive);
    Ok(out)
}

/// Chart of a point of P¹: `true` when `x₁ ≠ 0` (normalize `x₁ = 1`).
fn chart_uses_x1(p: &P1Point) -> bool {
    !p.coords()[1].is_zero()
}

/// The point's coordinates in its chart, normalized coordinate equal to 1.
fn chart_rep(p: &P1Point) -> [CycloNum; 2] {
    let [x0, x1] = p.coords();
    if chart_uses_x1(p) {
        [x0 * &x1.inv().expect("nonzero"), CycloNum::one()]
    } else {
        [CycloNum::one(), CycloNum::zero()]
    }
}

fn chart_coordinate(p: &P1Point) -> CycloNum {
    let [x0, x1] = chart_rep(p);
    if chart_uses_x1(p) {
        x0
    } else {
        x1
    }
}

/// Derivative at `src` of the Möbius map `m`, read in the charts of `src` and
/// of `dst = m(src)`.
fn chart_derivative(m: &Mat2, src: &P1Point, dst: &P1Point) -> CycloNum {
    let (e0, e1) = if chart_uses_x1(src) {
        ([CycloNum::zero(), CycloNum::one()], [CycloNum::one(), CycloNum::zero()])
    } else {
        ([CycloNum::one(), CycloNum::zero()], [CycloNum::zero(), CycloNum::one()])
    };
    let (alpha, beta) = (m.apply(&e0), m.apply(&e1));
    let (n, d) = if chart_uses_x1(dst) { (0, 1) } else { (1, 0) };
    let t = chart_coordinate(src);
    let den = &alpha[d] + &(&t * &beta[d]);
    let num = &beta[n] * &alpha[d] - &alpha[n] * &beta[d];
    &num * &(&den * &den).inv().expect("image point is in the target chart")
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LefschetzResult {
    pub terms: Vec<(Point4, CycloNum)>,
    pub sum: CycloNum,
}

/// `Σ 1/det(I - d_x g)` over the (isolated, nondegenerate) fixed points.
pub fn lefschetz_sum(g: &ProductAuto) -> Result<LefschetzResult, GeometryError> {
    let element = g.to_string();
    let mut terms = Vec::new();
    for comp in fixed_locus(g)? {
        let FixedComponent::IsolatedPoint { point, degenerate } = comp else {
            return Err(GeometryError::PositiveDimensional { element });
        };
        if degenerate {
            return Err(GeometryError::Degenerate {
                element,
                point: point_string(&point),
            });
        }
        let mut m = ExactMatrix::identity(4);
        for i in 0..4 {
            let s = g.perm.apply(i);
            let d = chart_derivative(g.mats[i].rep(), &point[s], &point[i]);
            m[(i, s)] -= &d;
        }
        let det = m.determinant();
        let Some(term) = det.inv() else {
            return Err(GeometryError::Degenerate {
                element,
                point: point_string(&point),
            });
        };
        terms.push((point, term));
    }
    let sum = terms.iter().map(|(_, t)| t.clone()).sum();
    Ok(LefschetzResult { terms, sum })
}

/// Jacobian of `polys` in the affine chart around `pt`: column `i` is the
/// partial derivative in the chart coordinate of factor `i`.
pub fn chart_jacobian(polys: &[MultiPoly], pt: &Point4) -> ExactMatrix {
    let reps: [[CycloNum; 2]; 4] = std::array::from_fn(|i| chart_rep(&pt[i]));
    let rows = polys
        .iter()
        .map(|p| {
            (0..4)
                .map(|i| {
                    let var = if chart_uses_x1(&pt[i]) { 0 } else { 1 };
                    p.partial(i, var).eval_coords(&reps)
                })
                .collect()
        })
        .collect();
    ExactMatrix::from_rows(rows)
}

pub fn is_smooth_at(polys: &[MultiPoly], pt: &Point4, expected_codim: usize) -> Result<bool, GeometryError> {
    if let Some(index) = polys.iter().position(|p| !p.eval(pt).is_zero()) {
        return Err(GeometryError::NotOnZeroLocus {
            index,
            point: point_string(pt),
        });
    }
    if polys.is_empty() {
        return Ok(expected_codim == 0);
    }
    Ok(chart_jacobian(polys, pt).rank() == expected_codim)
}

/// The 64 points of the four coordinate blocks of the base locus of the Q
/// family: two factors at a coordinate point, one at `(1:±i)`, one at `(1:±1)`.
pub fn expanded_base_points() -> Vec<Point4> {
    let coord = vec![P1Point::affine(CycloNum::zero()), P1Point::infinity()];
    let plus_i = vec![P1Point::affine(CycloNum::i()), P1Point::affine(-CycloNum::i())];
    let plus_one = vec![P1Point::affine(CycloNum::one()), P1Point::affine(CycloNum::from_int(-1))];
    let blocks = [
        [&coord, &coord, &plus_i, &plus_one],
        [&coord, &coord, &plus_one, &plus_i],
        [&plus_i, &plus_one, &coord, &coord],
        [&plus_one, &plus_i, &coord, &coord],
    ];
    let mut out = Vec::new();
    for block in blocks {
        for a in block[0] {
            for b in block[1] {
                for c in block[2] {
                    for d in block[3] {
                        out.push([a.clone(), b.clone(), c.clone(), d.clone()]);
                    }
                }
            }
        }
    }
    out
}

/// The three sets of 16 points `{(1:0),(0:1)}⁴`, `{(1:±1)}⁴`, `{(1:±i)}⁴`.
pub fn coordinate_fixed_sets() -> [Vec<Point4>; 3] {
    let cube = |pair: [P1Point; 2]| -> Vec<Point4> {
        let mut out = Vec::new();
        for mask in 0..16usize {
            out.push(std::array::from_fn(|i| pair[(mask >> (3 - i)) & 1].clone()));
        }
        out.sort();
        out
    };
    [
        cube([P1Point::affine(CycloNum::zero()), P1Point::infinity()]),
        cube([P1Point::affine(CycloNum::one()), P1Point::affine(CycloNum::from_int(-1))]),
        cube([P1Point::affine(CycloNum::i()), P1Point::affine(-CycloNum::i())]),
    ]
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BasePointReport {
    pub points: usize,
    pub distinct: usize,
    /// `(polynomial index, point)` pairs where the polynomial is nonzero.
    pub failures: Vec<(usize, Point4)>,
}

impl BasePointReport {
    pub fn all_pass(&self) -> bool {
        self.failures.is_empty()
    }

    /// Points at which some family member is nonzero.
    pub fn failing_points(&self) -> usize {
        let set: std::collections::BTreeSet<&Point4> = self.failures.iter().map(|(_, p)| p).collect();
        set.len()
    }
}

pub fn verify_claimed_base_points(family: &[MultiPoly], points: &[Point4]) -> BasePointReport {
    let mut failures = Vec::new();
    for pt in points {
        for (k, p) in family.iter().enumerate() {
            if !p.eval(pt).is_zero() {
                failures.push((k, pt.clone()));
            }
        }
    }
    let distinct = points.iter().collect::<std::collections::BTreeSet<_>>().len();
    BasePointReport {
        points: points.len(),
        distinct,
        failures,
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdmissibleVerdict {
    pub eigensection_ok: Vec<bool>,
    pub eigenvalues: Vec<Option<CycloNum>>,
    pub fixed_locus_finite: bool,
    pub avoidance_ok: bool,
    pub smooth_ok: bool,
    /// Value of the section at each fixed point, in fixed-locus order.
    pub details: Vec<(Point4, CycloNum)>,
}

impl AdmissibleVerdict {
    pub fn overall(&self) -> bool {
        self.eigensection_ok.iter().all(|&b| b) && self.fixed_locus_finite && self.avoidance_ok && self.smooth_ok
    }

    pub fn zero_fixed_points(&self) -> impl Iterator<Item = &Point4> {
        self.details.iter().filter(|(_, v)| v.is_zero()).map(|(p, _)| p)
    }
}

pub fn verify_admissible_pair(
    gens: &[LiftedAuto],
    s: &MultiPoly,
    smooth_spot_checks: &[Point4],
) -> Result<AdmissibleVerdict, GeometryError> {
    let eigenvalues: Vec<Option<CycloNum>> = gens.iter().map(|g| eigenvalue_of(g, s)).collect();
    let group = closure(&gens.iter().map(LiftedAuto::auto).collect::<Vec<_>>(), DEFAULT_CAP)?;
    let locus = group_fixed_locus(&group)?;
    let fixed_locus_finite = locus.iter().all(|(c, _)| c.dimension() == 0);
    let details: Vec<(Point4, CycloNum)> = locus
        .iter()
        .filter_map(|(c, _)| c.point())
        .map(|p| (p.clone(), s.eval(p)))
        .collect();
    let avoidance_ok = details.iter().all(|(_, v)| !v.is_zero());
    let smooth_ok = smooth_spot_checks
        .iter()
        .all(|p| is_smooth_at(std::slice::from_ref(s), p, 1).unwrap_or(false));
    Ok(AdmissibleVerdict {
        eigensection_ok: eigenvalues.iter().map(Option::is_some).collect(),
        eigenvalues,
        fixed_locus_finite,
        avoidance_ok,
        smooth_ok,
        details,
    })
}
