//! The verification suite: every numerical claim about the free quotients,
//! each run as an independent check with a stable id.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::autos::{builtin_group, compose, Point4, ProductAuto, BUILTIN_NAMES, ORDER_16_BUILTINS};
use crate::cyclo::CycloNum;
use crate::geometry::{
    coordinate_fixed_sets, expanded_base_points, fixed_locus, group_fixed_locus, is_smooth_at, lefschetz_sum, point_string,
    verify_claimed_base_points, FixedComponent,
};
use crate::group::{closure, identify_isomorphism_type, FiniteSubgroup, DEFAULT_CAP};
use crate::intersection::{chow_degree, euler_anticanonical, kunneth_cohomology, quotient_hodge, surface_invariants, BundleSum, ChowClass};
use crate::les::{alternating_sums_hold, les_chase, LesDescription};
use crate::linalg::ExactMatrix;
use crate::moebius::{Mat2, P1Point};
use crate::multihomog::{
    action_matrix, eigensection_space, eigenvalue_of, f1, full_support_eigenvector_exists, lifted_closure, monomial_string, q_family,
    LiftedAuto, MultiPoly,
};
use crate::perm::Perm;

pub const REPORT_SCHEMA: u32 = 1;

type CheckResult = Result<Verdict, Box<dyn std::error::Error + Send + Sync>>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Error,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Error => "error",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckRecord {
    pub id: String,
    pub description: String,
    pub anchor: String,
    pub status: Status,
    pub values: BTreeMap<String, Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Summary {
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
    pub errors: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationReport {
    pub schema: u32,
    pub version: String,
    pub checks: Vec<CheckRecord>,
    pub summary: Summary,
}

impl VerificationReport {
    pub fn all_pass(&self) -> bool {
        self.summary.passed == self.summary.total
    }

    pub fn check(&self, id: &str) -> Option<&CheckRecord> {
        self.checks.iter().find(|c| c.id == id)
    }

    /// Pretty JSON with a trailing newline.
    pub fn to_json(&self) -> String {
        let mut out = serde_json::to_string_pretty(self).expect("report serializes");
        out.push('\n');
        out
    }

    pub fn to_markdown(&self) -> String {
        let mut out = String::new();
        let s = &self.summary;
        let _ = writeln!(out, "# Verification report\n");
        let _ = writeln!(out, "{}\n", self.version);
        let _ = writeln!(
            out,
            "{} checks: {} pass, {} fail, {} error\n",
            s.total, s.passed, s.failed, s.errors
        );
        let _ = writeln!(out, "| id | status | description |");
        let _ = writeln!(out, "|---|---|---|");
        for c in &self.checks {
            let _ = writeln!(out, "| `{}` | {} | {} |", c.id, c.status.as_str(), c.description);
        }
        for c in &self.checks {
            let _ = writeln!(out, "\n## `{}`: {}\n", c.id, c.status.as_str());
            let _ = writeln!(out, "{}\n", c.description);
            let _ = writeln!(out, "Reference: {}\n", c.anchor);
            if let Some(cx) = &c.counterexample {
                let _ = writeln!(out, "First counterexample: {cx}\n");
            }
            if let Some(e) = &c.error {
                let _ = writeln!(out, "Error: {e}\n");
            }
            for (k, v) in &c.values {
                let _ = writeln!(out, "- {k}: `{v}`");
            }
        }
        out
    }
}

/// Outcome of one check before it is stamped with its metadata.
#[derive(Debug, Default)]
struct Verdict {
    failed: bool,
    values: BTreeMap<String, Value>,
    counterexample: Option<String>,
}

impl Verdict {
    fn value(&mut self, key: &str, v: impl Serialize) {
        self.values
            .insert(key.to_string(), serde_json::to_value(v).expect("serializable value"));
    }

    /// Records a failure unless `ok`; only the first counterexample is kept.
    fn require(&mut self, ok: bool, counterexample: impl FnOnce() -> String) {
        if !ok {
            self.failed = true;
            if self.counterexample.is_none() {
                self.counterexample = Some(counterexample());
            }
        }
    }
}

struct CheckDef {
    id: &'static str,
    description: &'static str,
    anchor: &'static str,
    run: fn() -> CheckResult,
}

const CHECKS: &[CheckDef] = &[
    CheckDef {
        id: "base-points-q4-gradient",
        description: "Q4 has a nonzero gradient at each of the 64 base points",
        anchor: "smoothness of (Q4 = 0) along the base locus",
        run: base_points_q4_gradient,
    },
    CheckDef {
        id: "base-points-rank",
        description: "Q0..Q5 are linearly independent in H0(O_X(2,2,2,2))",
        anchor: "the linear system L is 5-dimensional",
        run: base_points_rank,
    },
    CheckDef {
        id: "base-points-vanishing",
        description: "the four coordinate blocks expand to 64 distinct points annihilating Q0..Q5",
        anchor: "the 64 base points of L",
        run: base_points_vanishing,
    },
    CheckDef {
        id: "cohomology-chase",
        description: "long exact sequence chase from Kunneth inputs and declared vanishings",
        anchor: "cohomology table and h1, h2 of Theta_T",
        run: cohomology_chase,
    },
    CheckDef {
        id: "cohomology-kunneth",
        description: "Kunneth reproduces the cohomology rows of twists of Theta_X",
        anchor: "cohomology table, rows on X",
        run: cohomology_kunneth,
    },
    CheckDef {
        id: "fano-base-point-smoothness",
        description: "{Q4, F1} has Jacobian rank 2 at every base point of L lying on V = (F1 = 0)",
        anchor: "smoothness of (Q4 = 0) on V along the base locus",
        run: fano_base_point_smoothness,
    },
    CheckDef {
        id: "fano-singular-points",
        description: "among the 48 fixed points, grad F1 vanishes exactly on the 8 points of Fix(h^2) with sign product -1",
        anchor: "singular locus of the Fano threefold V",
        run: fano_singular_points,
    },
    CheckDef {
        id: "fixed-loci-dimension",
        description: "every nontrivial element of every built-in group has a finite fixed locus",
        anchor: "dimension of Fix(G) is 0",
        run: fixed_loci_dimension,
    },
    CheckDef {
        id: "fixed-loci-partition",
        description: "Fix(Z4 : Z4) is 48 points split by g^2, h^2, g^2h^2 into the three coordinate sets",
        anchor: "the three disjoint sets of 16 fixed points",
        run: fixed_loci_partition,
    },
    CheckDef {
        id: "freeness-base-locus",
        description: "the 64 base points of L avoid the 48 fixed points",
        anchor: "freeness of the action on the general Y in L",
        run: freeness_base_locus,
    },
    CheckDef {
        id: "freeness-eigenvectors",
        description: "each Qi is an eigenvector of both lifted generators with one common eigenvalue pair",
        anchor: "g and h fix all of the Qi",
        run: freeness_eigenvectors,
    },
    CheckDef {
        id: "freeness-q4-fixed-points",
        description: "Q4 is nonzero at all 48 fixed points",
        anchor: "freeness of the action on the general Y in L",
        run: freeness_q4_fixed_points,
    },
    CheckDef {
        id: "group-classification",
        description: "the four order-16 built-ins close to groups of order 16 of the expected types",
        anchor: "classification of admissible groups of order 16",
        run: group_classification,
    },
    CheckDef {
        id: "hodge-table",
        description: "Hodge numbers and heights of Y/G for every built-in group",
        anchor: "Hodge numbers of the quotients",
        run: hodge_table,
    },
    CheckDef {
        id: "intersection-degrees",
        description: "H^4 = 24 and 2H.H^3 = 48",
        anchor: "K_T^2 = 2H^4 = 48",
        run: intersection_degrees,
    },
    CheckDef {
        id: "intersection-euler",
        description: "Euler number of a smooth anticanonical Y is -128",
        anchor: "chi(Y) = -128",
        run: intersection_euler,
    },
    CheckDef {
        id: "invariant-divisor-anticommute",
        description: "g1 h1 + h1 g1 = 0 on H0(O_X(H)) for the Z8 x Z2 and Z4 x Z4 lifts",
        anchor: "no invariant divisor in |O_X(H)|",
        run: invariant_divisor_anticommute,
    },
    CheckDef {
        id: "invariant-divisor-scan",
        description: "no simultaneous eigenvector in H0(O_X(H)) for any pair of 16th roots of unity",
        anchor: "no invariant divisor in |O_X(H)|",
        run: invariant_divisor_scan,
    },
    CheckDef {
        id: "lefschetz-all-elements",
        description: "holomorphic Lefschetz sum equals 1 for every nontrivial element of every built-in group",
        anchor: "holomorphic Lefschetz fixed point formula",
        run: lefschetz_all_elements,
    },
    CheckDef {
        id: "lefschetz-z2-terms",
        description: "(A,A,A,A) contributes 16 terms of 1/16",
        anchor: "holomorphic Lefschetz fixed point formula",
        run: lefschetz_z2_terms,
    },
    CheckDef {
        id: "obstruction-sigma-12",
        description: "(id, A, diag(1,+-i), diag(1,+-i)) o (12) admits no full-support eigensection",
        anchor: "order-4 elements with sigma = (12)",
        run: obstruction_sigma_12,
    },
    CheckDef {
        id: "obstruction-sigma-12-34",
        description: "(id,A,id,A) o (12)(34) admits a full-support eigensection",
        anchor: "order-4 elements with sigma = (12)(34)",
        run: obstruction_sigma_12_34,
    },
    CheckDef {
        id: "obstruction-sigma-id",
        description: "all 16 lifts (diag(1,+-i), ...) admit no full-support eigensection",
        anchor: "order-4 elements with sigma = id",
        run: obstruction_sigma_id,
    },
    CheckDef {
        id: "representation-character",
        description: "character of Z4 : Z4 on H0(O_X(H)) is (16, 0, ..., 0)",
        anchor: "H0(O_X(H)) is the regular representation",
        run: representation_character,
    },
    CheckDef {
        id: "representation-fano-eigenspace",
        description: "the F1 eigenspace in degree (1,1,1,1) is the line spanned by F1",
        anchor: "H0(O_X(H))^G = <F1>",
        run: representation_fano_eigenspace,
    },
    CheckDef {
        id: "representation-quadric-eigenspace",
        description: "the Q0 eigenspace in degree (2,2,2,2) is 6-dimensional and equals span{Q0..Q5}",
        anchor: "dim (P')^G = 6",
        run: representation_quadric_eigenspace,
    },
    CheckDef {
        id: "surface-invariants",
        description: "invariants of T and of S = T/G for |G| = 16",
        anchor: "p_g(S) = q(S) = 0, K_S^2 = 3, expected moduli dimension 4",
        run: surface_invariants_check,
    },
];

/// All check ids in execution order.
pub fn check_ids() -> Vec<&'static str> {
    CHECKS.iter().map(|c| c.id).collect()
}

/// Runs the checks whose id starts with one of `only` (all checks if empty).
pub fn run_verification_suite(only: &[String]) -> VerificationReport {
    let selected: Vec<&CheckDef> = CHECKS
        .iter()
        .filter(|c| only.is_empty() || only.iter().any(|p| c.id.starts_with(p.as_str())))
        .collect();
    let checks: Vec<CheckRecord> = selected
        .par_iter()
        .map(|def| {
            let (status, values, counterexample, error) = match (def.run)() {
                Ok(v) => (if v.failed { Status::Fail } else { Status::Pass }, v.values, v.counterexample, None),
                Err(e) => (Status::Error, BTreeMap::new(), None, Some(e.to_string())),
            };
            CheckRecord {
                id: def.id.to_string(),
                description: def.description.to_string(),
                anchor: def.anchor.to_string(),
                status,
                values,
                counterexample,
                error,
            }
        })
        .collect();
    let count = |s: Status| checks.iter().filter(|c| c.status == s).count();
    let summary = Summary {
        total: checks.len(),
        passed: count(Status::Pass),
        failed: count(Status::Fail),
        errors: count(Status::Error),
    };
    VerificationReport {
        schema: REPORT_SCHEMA,
        version: concat!("freequot-core ", env!("CARGO_PKG_VERSION")).to_string(),
        checks,
        summary,
    }
}

fn builtin_closure(name: &str) -> Result<FiniteSubgroup, Box<dyn std::error::Error + Send + Sync>> {
    Ok(closure(&builtin_group(name)?, DEFAULT_CAP)?)
}

fn canonical_lifts(name: &str) -> Result<Vec<LiftedAuto>, Box<dyn std::error::Error + Send + Sync>> {
    Ok(builtin_group(name)?.iter().map(LiftedAuto::canonical).collect())
}

/// `g²`, `h²` and `g²h²` for the Z4 : Z4 generators.
fn case3_involutions() -> Result<[ProductAuto; 3], Box<dyn std::error::Error + Send + Sync>> {
    let gens = builtin_group("z4sz4")?;
    let g2 = compose(&gens[0], &gens[0]);
    let h2 = compose(&gens[1], &gens[1]);
    let g2h2 = compose(&g2, &h2);
    Ok([g2, h2, g2h2])
}

fn case3_fixed_points() -> Result<Vec<Point4>, Box<dyn std::error::Error + Send + Sync>> {
    let locus = group_fixed_locus(&builtin_closure("z4sz4")?)?;
    Ok(locus.iter().filter_map(|(c, _)| c.point().cloned()).collect())
}

fn cyclo_text(c: &CycloNum) -> String {
    c.to_string()
}

fn group_classification() -> CheckResult {
    let mut v = Verdict::default();
    let mut found = BTreeMap::new();
    for (name, label) in ORDER_16_BUILTINS {
        let g = builtin_closure(name)?;
        let ty = identify_isomorphism_type(&g)?;
        found.insert(name, json!({ "order": g.order(), "type": ty.label }));
        v.require(g.order() == 16 && ty.label == label, || {
            format!("{name}: order {}, type {}", g.order(), ty.label)
        });
    }
    v.value("groups", found);
    Ok(v)
}

fn fixed_loci_partition() -> CheckResult {
    let mut v = Verdict::default();
    let g = builtin_closure("z4sz4")?;
    let locus = group_fixed_locus(&g)?;
    let points: BTreeSet<Point4> = locus.iter().filter_map(|(c, _)| c.point().cloned()).collect();
    v.value("fixed_points", points.len());
    v.require(points.len() == 48 && locus.len() == 48, || {
        format!("{} components, {} points", locus.len(), points.len())
    });
    let names = ["g^2", "h^2", "g^2h^2"];
    let expected = coordinate_fixed_sets();
    for (k, inv) in case3_involutions()?.iter().enumerate() {
        let idx = g.index_of(inv).ok_or("involution missing from closure")?;
        let fixed: BTreeSet<Point4> = locus
            .iter()
            .filter(|(_, stab)| stab.contains(&idx))
            .filter_map(|(c, _)| c.point().cloned())
            .collect();
        let want: BTreeSet<Point4> = expected[k].iter().cloned().collect();
        v.value(&format!("fix({})", names[k]), fixed.len());
        if let Some(p) = fixed.symmetric_difference(&want).next() {
            v.require(false, || format!("{} at {}", names[k], point_string(p)));
        }
    }
    Ok(v)
}

fn fixed_loci_dimension() -> CheckResult {
    let mut v = Verdict::default();
    let mut sizes = BTreeMap::new();
    for name in BUILTIN_NAMES {
        let locus = group_fixed_locus(&builtin_closure(name)?)?;
        for (c, stab) in &locus {
            v.require(c.dimension() == 0, || format!("{name}: element {} has component {c}", stab[0]));
        }
        sizes.insert(name, locus.len());
    }
    v.value("fixed_points", sizes);
    Ok(v)
}

fn lefschetz_all_elements() -> CheckResult {
    let mut v = Verdict::default();
    let mut checked = 0;
    for name in BUILTIN_NAMES {
        let g = builtin_closure(name)?;
        for elem in g.nontrivial() {
            let sum = lefschetz_sum(elem)?.sum;
            checked += 1;
            v.require(sum.is_one(), || format!("{name}: {elem} has sum {sum}"));
        }
    }
    v.value("elements", checked);
    Ok(v)
}

fn lefschetz_z2_terms() -> CheckResult {
    let mut v = Verdict::default();
    let r = lefschetz_sum(&builtin_group("z2")?[0])?;
    let sixteenth = CycloNum::from_ratio(1, 16);
    v.value("terms", r.terms.len());
    v.value("sum", cyclo_text(&r.sum));
    v.require(r.terms.len() == 16, || format!("{} terms", r.terms.len()));
    for (p, t) in &r.terms {
        v.require(*t == sixteenth, || format!("term {t} at {}", point_string(p)));
    }
    v.require(r.sum.is_one(), || format!("sum {}", r.sum));
    Ok(v)
}

fn base_points_rank() -> CheckResult {
    let mut v = Verdict::default();
    let qs = q_family();
    let m = ExactMatrix::from_columns(81, qs.iter().map(MultiPoly::to_vector).collect());
    let rank = m.rank();
    v.value("rank", rank);
    v.require(rank == 6, || format!("rank {rank}"));
    Ok(v)
}

fn base_points_vanishing() -> CheckResult {
    let mut v = Verdict::default();
    let r = verify_claimed_base_points(&q_family(), &expanded_base_points());
    v.value("points", r.points);
    v.value("distinct", r.distinct);
    v.require(r.points == 64 && r.distinct == 64, || {
        format!("{} points, {} distinct", r.points, r.distinct)
    });
    if let Some((k, p)) = r.failures.first() {
        v.require(false, || format!("Q{k} is nonzero at {}", point_string(p)));
    }
    Ok(v)
}

fn base_points_q4_gradient() -> CheckResult {
    let mut v = Verdict::default();
    let q4 = &q_family()[4];
    let points = expanded_base_points();
    for p in &points {
        v.require(q4.gradient(p).iter().any(|c| !c.is_zero()), || {
            format!("grad Q4 = 0 at {}", point_string(p))
        });
    }
    v.value("points", points.len());
    Ok(v)
}

fn freeness_q4_fixed_points() -> CheckResult {
    let mut v = Verdict::default();
    let q4 = &q_family()[4];
    let fixed = case3_fixed_points()?;
    let zeros: Vec<&Point4> = fixed.iter().filter(|p| q4.eval(p).is_zero()).collect();
    v.value("fixed_points", fixed.len());
    v.value("zeros_of_q4", zeros.len());
    if let Some(p) = zeros.first() {
        v.require(false, || format!("Q4 vanishes at {}", point_string(p)));
    }
    Ok(v)
}

fn freeness_eigenvectors() -> CheckResult {
    let mut v = Verdict::default();
    let lifts = canonical_lifts("z4sz4")?;
    let mut pairs = Vec::new();
    for (k, q) in q_family().iter().enumerate() {
        let pair: Vec<Option<CycloNum>> = lifts.iter().map(|g| eigenvalue_of(g, q)).collect();
        v.require(pair.iter().all(Option::is_some), || format!("Q{k} is not an eigenvector"));
        pairs.push(pair);
    }
    v.require(pairs.windows(2).all(|w| w[0] == w[1]), || {
        let k = pairs.windows(2).position(|w| w[0] != w[1]).unwrap_or(0) + 1;
        format!("Q{k} has eigenvalues {:?}, Q0 has {:?}", pairs[k], pairs[0])
    });
    let shown: Vec<Option<String>> = pairs[0].iter().map(|c| c.as_ref().map(cyclo_text)).collect();
    v.value("eigenvalues", shown);
    Ok(v)
}

fn freeness_base_locus() -> CheckResult {
    let mut v = Verdict::default();
    let fixed: BTreeSet<Point4> = case3_fixed_points()?.into_iter().collect();
    for p in expanded_base_points() {
        v.require(!fixed.contains(&p), || format!("base point {} is fixed", point_string(&p)));
    }
    Ok(v)
}

fn invariant_divisor_anticommute() -> CheckResult {
    let mut v = Verdict::default();
    for name in ["z8xz2", "z4xz4"] {
        let lifts = canonical_lifts(name)?;
        let (g, h) = (action_matrix(&lifts[0], [1; 4])?, action_matrix(&lifts[1], [1; 4])?);
        let anti = (&g * &h).add(&(&h * &g));
        v.value(name, anti.is_zero());
        v.require(anti.is_zero(), || format!("{name}: g1 h1 + h1 g1 is nonzero"));
    }
    Ok(v)
}

fn invariant_divisor_scan() -> CheckResult {
    let mut v = Verdict::default();
    let roots = CycloNum::roots_of_unity();
    for name in ["z8xz2", "z4xz4"] {
        let lifts = canonical_lifts(name)?;
        let mut pairs = 0;
        for lambda in &roots {
            for mu in &roots {
                let dim = eigensection_space(&lifts, [1; 4], &[lambda.clone(), mu.clone()])?.cols();
                pairs += 1;
                v.require(dim == 0, || format!("{name}: eigenvalues ({lambda}, {mu}) give dimension {dim}"));
            }
        }
        v.value(name, pairs);
    }
    Ok(v)
}

fn representation_character() -> CheckResult {
    let mut v = Verdict::default();
    let lifts = lifted_closure(&canonical_lifts("z4sz4")?, DEFAULT_CAP)?;
    let mut traces = Vec::new();
    for (k, g) in lifts.iter().enumerate() {
        let t = action_matrix(g, [1; 4])?.trace();
        let expected = if k == 0 { CycloNum::from_int(16) } else { CycloNum::zero() };
        v.require(t == expected, || format!("trace {t} at {}", g.auto()));
        traces.push(cyclo_text(&t));
    }
    v.value("character", traces);
    Ok(v)
}

fn representation_fano_eigenspace() -> CheckResult {
    let mut v = Verdict::default();
    let lifts = canonical_lifts("z4sz4")?;
    let f = f1();
    let eigen: Option<Vec<CycloNum>> = lifts.iter().map(|g| eigenvalue_of(g, &f)).collect();
    let Some(eigen) = eigen else {
        v.require(false, || "F1 is not an eigenvector".to_string());
        return Ok(v);
    };
    let space = eigensection_space(&lifts, [1; 4], &eigen)?;
    v.value("eigenvalues", eigen.iter().map(cyclo_text).collect::<Vec<_>>());
    v.value("dimension", space.cols());
    v.require(space.cols() == 1, || format!("dimension {}", space.cols()));
    let mut cols = space.columns();
    cols.push(f.to_vector());
    v.require(ExactMatrix::from_columns(16, cols).rank() == space.cols(), || {
        "F1 is not in the eigenspace".to_string()
    });
    Ok(v)
}

fn representation_quadric_eigenspace() -> CheckResult {
    let mut v = Verdict::default();
    let lifts = canonical_lifts("z4sz4")?;
    let qs = q_family();
    let eigen: Option<Vec<CycloNum>> = lifts.iter().map(|g| eigenvalue_of(g, &qs[0])).collect();
    let Some(eigen) = eigen else {
        v.require(false, || "Q0 is not an eigenvector".to_string());
        return Ok(v);
    };
    let space = eigensection_space(&lifts, [2; 4], &eigen)?;
    v.value("eigenvalues", eigen.iter().map(cyclo_text).collect::<Vec<_>>());
    v.value("dimension", space.cols());
    v.require(space.cols() == 6, || format!("dimension {}", space.cols()));
    let mut cols = space.columns();
    cols.extend(qs.iter().map(MultiPoly::to_vector));
    let joint = ExactMatrix::from_columns(81, cols).rank();
    v.value("rank_of_union_with_q_family", joint);
    v.require(joint == space.cols() && joint == 6, || {
        format!("span of eigenspace and Q0..Q5 has rank {joint}")
    });
    Ok(v)
}

/// The eight points `(1:s₁)..(1:s₄)` with `sᵢ = ±1` and `∏ sᵢ = -1`.
fn sign_product_minus_one_points() -> BTreeSet<Point4> {
    let mut out = BTreeSet::new();
    for mask in 0..16u32 {
        if mask.count_ones() % 2 == 1 {
            let pt: Point4 = std::array::from_fn(|i| P1Point::affine(CycloNum::from_int(if mask >> i & 1 == 1 { -1 } else { 1 })));
            out.insert(pt);
        }
    }
    out
}

fn fano_singular_points() -> CheckResult {
    let mut v = Verdict::default();
    let f = f1();
    let singular: BTreeSet<Point4> = case3_fixed_points()?
        .into_iter()
        .filter(|p| f.gradient(p).iter().all(CycloNum::is_zero))
        .collect();
    let h2 = &case3_involutions()?[1];
    let fix_h2: BTreeSet<Point4> = fixed_locus(h2)?.iter().filter_map(FixedComponent::point).cloned().collect();
    let expected: BTreeSet<Point4> = sign_product_minus_one_points().intersection(&fix_h2).cloned().collect();
    v.value("expected", expected.len());
    v.value("computed", singular.len());
    v.value("computed_points", singular.iter().map(point_string).collect::<Vec<_>>());
    if let Some(p) = expected.difference(&singular).next() {
        v.require(false, || format!("grad F1 is nonzero at {}", point_string(p)));
    }
    if let Some(p) = singular.difference(&expected).next() {
        v.require(false, || format!("grad F1 vanishes at {}", point_string(p)));
    }
    v.require(expected.len() == 8, || format!("{} expected points", expected.len()));
    Ok(v)
}

fn fano_base_point_smoothness() -> CheckResult {
    let mut v = Verdict::default();
    let polys = [q_family()[4].clone(), f1()];
    let on_v: Vec<Point4> = expanded_base_points().into_iter().filter(|p| polys[1].eval(p).is_zero()).collect();
    for p in &on_v {
        v.require(is_smooth_at(&polys, p, 2)?, || format!("Jacobian rank < 2 at {}", point_string(p)));
    }
    v.value("base_points_on_v", on_v.len());
    v.require(!on_v.is_empty(), || "no base point lies on V".to_string());
    Ok(v)
}

fn intersection_euler() -> CheckResult {
    let mut v = Verdict::default();
    let e = euler_anticanonical();
    v.value("euler", e.euler);
    v.require(e.euler == -128, || format!("euler {}", e.euler));
    v.require(e.chern_y.part(0) == ChowClass::one(), || "c0(T_Y) != 1".to_string());
    v.require(e.chern_y.part(1) == ChowClass::zero(), || {
        format!("c1(T_Y) = {:?}", e.chern_y.part(1))
    });
    Ok(v)
}

fn intersection_degrees() -> CheckResult {
    let mut v = Verdict::default();
    let h = ChowClass::hyperplane();
    let h4 = chow_degree(&[h, h, h, h])?;
    let two_h = chow_degree(&[h.scale(2), h, h, h])?;
    v.value("H^4", h4);
    v.value("2H.H^3", two_h);
    v.require(h4 == 24, || format!("H^4 = {h4}"));
    v.require(two_h == 48, || format!("2H.H^3 = {two_h}"));
    Ok(v)
}

fn hodge_table() -> CheckResult {
    let mut v = Verdict::default();
    let expected: [(&str, [i64; 3]); 10] = [
        ("z2", [4, 36, 40]),
        ("z2xz2", [4, 20, 24]),
        ("z4", [2, 18, 20]),
        ("z8", [1, 9, 10]),
        ("q8", [1, 9, 10]),
        ("z4xz2", [2, 10, 12]),
        ("z8xz2", [1, 5, 6]),
        ("z4xz4", [1, 5, 6]),
        ("z4sz4", [1, 5, 6]),
        ("q8xz2", [1, 5, 6]),
    ];
    let mut rows = BTreeMap::new();
    for (name, want) in expected {
        let q = quotient_hodge(&builtin_closure(name)?)?;
        let got = [q.h11, q.h12, q.height];
        rows.insert(name, got);
        v.require(got == want, || format!("{name}: (h11, h12, height) = {got:?}"));
        v.require(2 * (q.h11 - q.h12) == q.euler, || {
            format!("{name}: euler {} != 2(h11 - h12)", q.euler)
        });
    }
    v.value("rows", rows);
    Ok(v)
}

fn cohomology_kunneth() -> CheckResult {
    let mut v = Verdict::default();
    let t = BundleSum::tangent();
    let rows = [
        ("Theta_X", 0, [12, 0, 0, 0, 0]),
        ("Theta_X(-H)", -1, [0; 5]),
        ("Theta_X(-2H)", -2, [0, 0, 0, 4, 0]),
        ("Theta_X(-3H)", -3, [0; 5]),
    ];
    let mut computed = BTreeMap::new();
    for (name, twist, want) in rows {
        let got = kunneth_cohomology(&t.twist(twist));
        computed.insert(name, got);
        v.require(got == want, || format!("{name}: {got:?}"));
    }
    v.value("rows", computed);
    Ok(v)
}

fn cohomology_chase() -> CheckResult {
    let mut v = Verdict::default();
    let desc = LesDescription::deformation_default();
    let sol = les_chase(&desc)?;
    let targets = [
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
    let mut got = BTreeMap::new();
    for (label, want) in targets {
        let value = sol.target(label);
        got.insert(label, value);
        v.require(value == Some(want), || format!("{label} = {value:?}"));
    }
    let table: [(&str, [i64; 4]); 8] = [
        ("O_Y(2H)", [80, 0, 0, 0]),
        ("O_Y(H)", [16, 0, 0, 0]),
        ("O_Y", [1, 0, 0, 1]),
        ("O_T(H)", [15, 0, 1, 0]),
        ("Theta_X|Y", [12, 0, 4, 0]),
        ("Theta_X|Y(-H)", [0, 0, 0, 0]),
        ("Theta_Y(-H)", [0, 16, 0, 0]),
        ("Theta_Y", [0, 68, 4, 0]),
    ];
    for (term, row) in table {
        for (q, want) in row.iter().enumerate() {
            let value = sol.dim(term, q);
            v.require(value == Some(*want), || format!("h{q}({term}) = {value:?}, table has {want}"));
        }
    }
    v.require(alternating_sums_hold(&desc, &sol), || "an alternating sum is violated".to_string());
    v.value("targets", got);
    v.value(
        "facts",
        desc.facts
            .iter()
            .map(|f| json!({ "term": f.term, "q": f.q, "value": f.value, "anchor": f.anchor }))
            .collect::<Vec<_>>(),
    );
    Ok(v)
}

fn surface_invariants_check() -> CheckResult {
    let mut v = Verdict::default();
    let s = surface_invariants(16)?;
    v.value("invariants", s);
    let got = [s.k2_s, s.chi_s, s.pg_t, s.expected_moduli_dim, s.pg_s, s.q];
    v.require(got == [3, 1, 15, 4, 0, 0], || {
        format!("(K2_S, chi_S, p_g(T), dim, p_g(S), q) = {got:?}")
    });
    Ok(v)
}

fn diag_i(sign: i64) -> Mat2 {
    Mat2::diag(CycloNum::one(), CycloNum::i() * CycloNum::from_int(sign))
}

fn expect_obstruction(v: &mut Verdict, g: &LiftedAuto) -> Result<(), Box<dyn std::error::Error + Send + Sync>> {
    let verdict = full_support_eigenvector_exists(g)?;
    let printed = ([0; 4], [0, 0, 0, 2]);
    v.require(!verdict.exists, || format!("{} admits a full-support eigensection", g.auto()));
    v.require(verdict.witness == Some(printed), || {
        let w = verdict.witness_strings().map(|(a, b)| format!("{a}, {b}")).unwrap_or_default();
        format!("{}: witness ({w})", g.auto())
    });
    Ok(())
}

fn printed_witness() -> [String; 2] {
    [monomial_string([2; 4], &[0; 4]), monomial_string([2; 4], &[0, 0, 0, 2])]
}

fn obstruction_sigma_id() -> CheckResult {
    let mut v = Verdict::default();
    for mask in 0..16u32 {
        let reps = std::array::from_fn(|i| diag_i(if mask >> i & 1 == 1 { -1 } else { 1 }));
        expect_obstruction(&mut v, &LiftedAuto::new(reps, Perm::IDENTITY)?)?;
    }
    v.value("lifts", 16);
    v.value("witness", printed_witness());
    Ok(v)
}

fn obstruction_sigma_12() -> CheckResult {
    let mut v = Verdict::default();
    let swap = Perm::from_cycles(&[vec![1, 2]])?;
    for (s3, s4) in [(1, 1), (1, -1), (-1, 1), (-1, -1)] {
        let reps = [Mat2::identity(), Mat2::a(), diag_i(s3), diag_i(s4)];
        expect_obstruction(&mut v, &LiftedAuto::new(reps, swap)?)?;
    }
    v.value("lifts", 4);
    v.value("witness", printed_witness());
    Ok(v)
}

fn obstruction_sigma_12_34() -> CheckResult {
    let mut v = Verdict::default();
    let g = LiftedAuto::canonical(&builtin_group("z4")?[0]);
    let verdict = full_support_eigenvector_exists(&g)?;
    v.value("exists", verdict.exists);
    v.require(verdict.exists, || {
        let w = verdict.witness_strings().map(|(a, b)| format!("{a}, {b}")).unwrap_or_default();
        format!("{}: obstructed by ({w})", g.auto())
    });
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ids_are_sorted_and_unique() {
        let ids = check_ids();
        let mut sorted = ids.clone();
        sorted.sort();
        sorted.dedup();
        assert_eq!(ids, sorted);
    }

    #[test]
    fn selection_by_prefix() {
        let r = run_verification_suite(&["lefschetz".to_string()]);
        let ids: Vec<&str> = r.checks.iter().map(|c| c.id.as_str()).collect();
        assert_eq!(ids, ["lefschetz-all-elements", "lefschetz-z2-terms"]);
        assert!(r.all_pass());
    }

    #[test]
    fn failing_check_names_counterexample() {
        let r = run_verification_suite(&["freeness-q4".to_string()]);
        let c = &r.checks[0];
        assert_eq!(c.status, Status::Fail);
        assert!(c.counterexample.as_deref().unwrap().starts_with("Q4 vanishes at"));
    }

    #[test]
    fn markdown_lists_every_check() {
        let r = run_verification_suite(&["intersection".to_string()]);
        let md = r.to_markdown();
        assert!(md.contains("`intersection-euler`") && md.contains("`intersection-degrees`"));
    }
}
