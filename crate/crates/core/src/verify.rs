//! Independent checks for cone conversions.
//!
//! The oracle here is the classical incremental double description method,
//! a different algorithm from the recursive engine in [`crate::cone`], and
//! cone membership is decided by an exact phase-one simplex. Nothing in this
//! module calls the engine.

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::cone::{classify, CaseAnalysis, GeneratorSet, HCone, RecursionStats};
use crate::error::{Error, Result};
use crate::linalg::{
    hadamard_bound, hadamard_screen, Membership, RatMatrix, RatVector, Rational, SubdeterminantSet,
    DEFAULT_ENUMERATION_CAP,
};

/// Size limits for the double description oracle.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OracleLimits {
    pub max_dim: usize,
    /// Bound on `p + q`.
    pub max_rows: usize,
    /// Bound on intermediate ray count.
    pub max_rays: usize,
}

impl Default for OracleLimits {
    fn default() -> Self {
        Self {
            max_dim: 6,
            max_rows: 12,
            max_rays: 50_000,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct VerifyOptions {
    pub limits: OracleLimits,
    /// Cap on submatrices visited when enumerating `sd(A)`.
    pub enumeration_cap: u128,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self {
            limits: OracleLimits::default(),
            enumeration_cap: DEFAULT_ENUMERATION_CAP,
        }
    }
}

/// Generators of `{x : Bx ≤ 0, Cx = 0}` by incremental halfspace insertion.
///
/// The state is a lineality basis `L` plus rays `R`, starting from `L` = the
/// unit vectors (so the initial cone is spanned by `±e_i`). A constraint that
/// cuts `span(L)` consumes one lineality vector; otherwise rays are split by
/// sign and every positive/negative pair is combined. No adjacency test is
/// made, so redundant rays can survive. Equations are inserted as two
/// opposite inequalities.
pub fn dd_generators(cone: &HCone, limits: &OracleLimits) -> Result<GeneratorSet> {
    let n = cone.dim();
    let b = cone.inequalities();
    let c = cone.equations();
    if n > limits.max_dim || b.rows() + c.rows() > limits.max_rows {
        return Err(Error::OracleUnavailable(format!(
            "instance {}x{} exceeds oracle limits (dim {}, rows {})",
            b.rows() + c.rows(),
            n,
            limits.max_dim,
            limits.max_rows
        )));
    }

    let mut constraints: Vec<RatVector> = b.row_vectors().collect();
    for row in c.row_vectors() {
        constraints.push(-&row);
        constraints.push(row);
    }

    let mut lineality: Vec<RatVector> = (0..n).map(|i| RatVector::unit(n, i)).collect();
    let mut rays: Vec<RatVector> = Vec::new();

    for a in &constraints {
        if let Some(idx) = lineality.iter().position(|l| !a.dot(l).is_zero()) {
            let mut pivot = lineality.remove(idx);
            let mut s = a.dot(&pivot);
            if s.is_positive() {
                pivot = -pivot;
                s = -s;
            }
            for l in lineality.iter_mut() {
                let t = a.dot(l) / &s;
                *l = l.add_scaled(&-t, &pivot);
            }
            for r in rays.iter_mut() {
                let t = a.dot(r) / &s;
                *r = r.add_scaled(&-t, &pivot).primitive_direction();
            }
            rays.push(pivot.primitive_direction());
        } else {
            let mut kept = Vec::new();
            let mut pos = Vec::new();
            let mut neg = Vec::new();
            for r in rays.drain(..) {
                let s = a.dot(&r);
                if s.is_positive() {
                    pos.push((r, s));
                } else {
                    if s.is_negative() {
                        neg.push((r.clone(), s));
                    }
                    kept.push(r);
                }
            }
            if kept.len() + pos.len() * neg.len() > limits.max_rays {
                return Err(Error::OracleUnavailable(format!(
                    "ray count would exceed {}",
                    limits.max_rays
                )));
            }
            for (p, sp) in &pos {
                for (q, sq) in &neg {
                    // a·(sp q - sq p) = 0 and both weights are positive
                    let combined = q.scaled(sp).add_scaled(&-sq, p);
                    kept.push(combined.primitive_direction());
                }
            }
            rays = kept;
        }
        rays.retain(|r| !r.is_zero());
        rays.sort();
        rays.dedup();
    }

    let mut out = GeneratorSet::new(n);
    for l in lineality {
        out.insert(-&l)?;
        out.insert(l)?;
    }
    for r in rays {
        out.insert(r)?;
    }
    Ok(out)
}

/// Decides `x ∈ cone(X)` exactly.
///
/// Phase one of the simplex method on `Gλ = x, λ ≥ 0` with one artificial
/// variable per row. Entering and leaving variables follow Bland's rule
/// (lowest eligible index), which rules out cycling.
pub fn cone_member(x: &RatVector, generators: &GeneratorSet) -> bool {
    debug_assert_eq!(x.dim(), generators.dim());
    if x.is_zero() {
        return true;
    }
    let cols: Vec<&RatVector> = generators.iter().collect();
    phase_one_feasible(&cols, x)
}

fn phase_one_feasible(cols: &[&RatVector], rhs: &RatVector) -> bool {
    let m = rhs.dim();
    let k = cols.len();
    let width = k + m;
    // tableau rows: [original columns | artificials | rhs]
    let mut tab: Vec<Vec<Rational>> = (0..m)
        .map(|i| {
            let flip = rhs[i].is_negative();
            let mut row = Vec::with_capacity(width + 1);
            for col in cols {
                row.push(if flip { -&col[i] } else { col[i].clone() });
            }
            for j in 0..m {
                row.push(if i == j {
                    Rational::one()
                } else {
                    Rational::zero()
                });
            }
            row.push(rhs[i].abs());
            row
        })
        .collect();
    let mut basis: Vec<usize> = (k..width).collect();

    loop {
        // reduced cost of an original column: -(sum of its entries in artificial rows)
        let entering = (0..k).find(|&j| {
            if basis.contains(&j) {
                return false;
            }
            let z: Rational = (0..m)
                .filter(|&i| basis[i] >= k)
                .fold(Rational::zero(), |acc, i| acc + &tab[i][j]);
            z.is_positive()
        });
        let Some(j) = entering else {
            break;
        };

        let mut leave: Option<(usize, Rational)> = None;
        for i in 0..m {
            if !tab[i][j].is_positive() {
                continue;
            }
            let ratio = &tab[i][width] / &tab[i][j];
            let better = match &leave {
                None => true,
                Some((li, best)) => ratio < *best || (ratio == *best && basis[i] < basis[*li]),
            };
            if better {
                leave = Some((i, ratio));
            }
        }
        let Some((r, _)) = leave else {
            // unbounded direction cannot occur in phase one; objective is bounded below by 0
            break;
        };

        let pivot = tab[r][j].clone();
        for e in tab[r].iter_mut() {
            *e /= &pivot;
        }
        let prow = tab[r].clone();
        for (i, row) in tab.iter_mut().enumerate() {
            if i == r || row[j].is_zero() {
                continue;
            }
            let f = row[j].clone();
            for (e, p) in row.iter_mut().zip(&prow) {
                *e -= &f * p;
            }
        }
        basis[r] = j;
    }

    (0..m)
        .filter(|&i| basis[i] >= k)
        .all(|i| tab[i][width].is_zero())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VectorCheck {
    pub vector: RatVector,
    pub ok: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ComponentStatus {
    pub generator: usize,
    pub component: usize,
    pub value: String,
    pub status: Membership,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum QsdMethod {
    Enumeration,
    HadamardBound,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QsdReport {
    pub method: QsdMethod,
    pub members: usize,
    pub non_members: usize,
    pub inconclusive: usize,
    pub components: Vec<ComponentStatus>,
}

impl QsdReport {
    pub fn all_members(&self) -> bool {
        self.non_members == 0 && self.inconclusive == 0
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct CertificateStats {
    pub dim: usize,
    pub inequalities: usize,
    pub equations: usize,
    pub generators: usize,
    pub oracle_rays: usize,
    pub recursion: Option<RecursionStats>,
}

/// Checkable evidence that `{x : Bx ≤ 0, Cx = 0} = cone(X)` with `X ⊆ qsd(A)^n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Certificate {
    /// Per generator: `Bg ≤ 0` and `Cg = 0`.
    pub soundness: Vec<VectorCheck>,
    /// Per oracle ray: membership in `cone(X)`.
    pub completeness: Vec<VectorCheck>,
    /// Per generator: membership in the cone of the oracle rays.
    pub reverse: Vec<VectorCheck>,
    pub qsd: QsdReport,
    pub stats: CertificateStats,
    /// Set when the oracle could not run; only soundness and qsd are then filled in.
    pub oracle_error: Option<String>,
}

impl Certificate {
    pub fn soundness_ok(&self) -> bool {
        self.soundness.iter().all(|c| c.ok)
    }

    pub fn completeness_ok(&self) -> bool {
        self.oracle_error.is_none() && self.completeness.iter().all(|c| c.ok)
    }

    pub fn reverse_ok(&self) -> bool {
        self.oracle_error.is_none() && self.reverse.iter().all(|c| c.ok)
    }

    /// Overall verdict: every soundness and completeness flag holds.
    pub fn passed(&self) -> bool {
        self.soundness_ok() && self.completeness_ok()
    }

    pub fn with_recursion(mut self, stats: RecursionStats) -> Self {
        self.stats.recursion = Some(stats);
        self
    }
}

/// Per-component `qsd(A)` status of every generator.
pub fn qsd_report(a: &RatMatrix, generators: &GeneratorSet, cap: u128) -> QsdReport {
    enum Checker {
        Exact(SubdeterminantSet),
        Bound(Rational),
    }
    let checker = match SubdeterminantSet::new(a, cap) {
        Ok(set) => Checker::Exact(set),
        Err(_) => Checker::Bound(hadamard_bound(a)),
    };
    let mut report = QsdReport {
        method: match checker {
            Checker::Exact(_) => QsdMethod::Enumeration,
            Checker::Bound(_) => QsdMethod::HadamardBound,
        },
        members: 0,
        non_members: 0,
        inconclusive: 0,
        components: Vec::new(),
    };
    for (gi, g) in generators.iter().enumerate() {
        for (ci, value) in g.iter().enumerate() {
            let status = match &checker {
                Checker::Exact(set) if set.contains_quotient(value) => Membership::Member,
                Checker::Exact(_) => Membership::NonMember,
                Checker::Bound(bound) => hadamard_screen(a, value, bound),
            };
            match status {
                Membership::Member => report.members += 1,
                Membership::NonMember => report.non_members += 1,
                Membership::Inconclusive => report.inconclusive += 1,
            }
            report.components.push(ComponentStatus {
                generator: gi,
                component: ci,
                value: value.to_string(),
                status,
            });
        }
    }
    report
}

pub fn verify_conversion(
    cone: &HCone,
    generators: &GeneratorSet,
    options: &VerifyOptions,
) -> Certificate {
    let soundness: Vec<VectorCheck> = generators
        .iter()
        .map(|g| VectorCheck {
            vector: g.clone(),
            ok: cone.contains(g),
        })
        .collect();
    let qsd = qsd_report(&cone.stacked(), generators, options.enumeration_cap);
    let mut stats = CertificateStats {
        dim: cone.dim(),
        inequalities: cone.inequalities().rows(),
        equations: cone.equations().rows(),
        generators: generators.len(),
        oracle_rays: 0,
        recursion: None,
    };

    let (completeness, reverse, oracle_error) = match dd_generators(cone, &options.limits) {
        Ok(oracle) => {
            stats.oracle_rays = oracle.len();
            let completeness = oracle
                .iter()
                .map(|r| VectorCheck {
                    vector: r.clone(),
                    ok: cone_member(r, generators),
                })
                .collect();
            let reverse = generators
                .iter()
                .map(|g| VectorCheck {
                    vector: g.clone(),
                    ok: cone_member(g, &oracle),
                })
                .collect();
            (completeness, reverse, None)
        }
        Err(e) => (Vec::new(), Vec::new(), Some(e.to_string())),
    };

    Certificate {
        soundness,
        completeness,
        reverse,
        qsd,
        stats,
        oracle_error,
    }
}

/// Rank by plain Gauss-Jordan elimination, kept apart from the fraction-free
/// elimination used by the engine.
fn gauss_rank(m: &RatMatrix) -> usize {
    let mut rows: Vec<Vec<Rational>> = m.row_vectors().map(|r| r.into_entries()).collect();
    let mut rank = 0;
    for col in 0..m.cols() {
        let Some(p) = (rank..rows.len()).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, p);
        let pivot = rows[rank][col].clone();
        for e in rows[rank].iter_mut() {
            *e /= &pivot;
        }
        let prow = rows[rank].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != rank && !row[col].is_zero() {
                let f = row[col].clone();
                for (e, p) in row.iter_mut().zip(&prow) {
                    *e -= &f * p;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Re-derives the subspace / split decision from independent ranks and checks
/// the witness `classify` produced.
pub fn check_dichotomy(cone: &HCone) -> bool {
    let n = cone.dim();
    let ker_a = n - gauss_rank(&cone.stacked());
    let ker_c = n - gauss_rank(cone.equations());
    let expect_direct = ker_a + 1 >= ker_c;
    let b = cone.inequalities();

    match classify(cone) {
        CaseAnalysis::Direct {
            generators,
            inner_basis,
            extension,
        } => {
            expect_direct
                && inner_basis.len() == ker_a
                && inner_basis
                    .iter()
                    .all(|u| cone.stacked().mul_vec(u).is_zero())
                && extension.as_ref().is_none_or(|v| cone.contains(v))
                && generators.iter().all(|g| cone.contains(g))
        }
        CaseAnalysis::Split { z } => {
            let bz = b.mul_vec(&z);
            let sum = bz.iter().fold(Rational::zero(), |acc, e| acc + e);
            !expect_direct
                && !z.is_zero()
                && cone.equations().mul_vec(&z).is_zero()
                && sum.is_zero()
                && bz.iter().any(|e| e.is_positive())
                && bz.iter().any(|e| e.is_negative())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cone::conic_generators;

    fn cone(n: usize, b: &[&[i64]], c: &[&[i64]]) -> HCone {
        HCone::new(RatMatrix::from_i64(n, b), RatMatrix::from_i64(n, c)).unwrap()
    }

    fn v(e: &[i64]) -> RatVector {
        RatVector::from_i64(e)
    }

    fn gens(dim: usize, vs: &[&[i64]]) -> GeneratorSet {
        GeneratorSet::from_vectors(dim, vs.iter().map(|e| v(e))).unwrap()
    }

    fn wedge() -> HCone {
        cone(2, &[&[-1, 0], &[1, -1]], &[])
    }

    #[test]
    fn dd_whole_space() {
        let out = dd_generators(&HCone::whole_space(2).unwrap(), &OracleLimits::default()).unwrap();
        assert_eq!(out, gens(2, &[&[1, 0], &[-1, 0], &[0, 1], &[0, -1]]));
    }

    #[test]
    fn dd_orthant_and_wedge() {
        let limits = OracleLimits::default();
        let orthant = dd_generators(&cone(2, &[&[1, 0], &[0, 1]], &[]), &limits).unwrap();
        assert_eq!(orthant, gens(2, &[&[-1, 0], &[0, -1]]));
        let w = dd_generators(&wedge(), &limits).unwrap();
        assert_eq!(w, gens(2, &[&[0, 1], &[1, 1]]));
    }

    #[test]
    fn dd_respects_limits() {
        let big = HCone::whole_space(7).unwrap();
        assert!(matches!(
            dd_generators(&big, &OracleLimits::default()),
            Err(Error::OracleUnavailable(_))
        ));
    }

    #[test]
    fn member_examples() {
        let x = gens(2, &[&[0, 1], &[1, 1]]);
        assert!(cone_member(&v(&[0, 0]), &x));
        assert!(cone_member(&v(&[1, 1]), &x));
        assert!(cone_member(&v(&[1, 5]), &x));
        assert!(!cone_member(&v(&[-1, 0]), &x));
        assert!(!cone_member(&v(&[1, 0]), &x));
        assert!(!cone_member(&v(&[1, 0]), &GeneratorSet::new(2)));
    }

    #[test]
    fn member_with_degenerate_columns() {
        // repeated and parallel columns exercise ties in the ratio test
        let x = gens(
            3,
            &[&[1, 0, 0], &[2, 0, 0], &[0, 1, 0], &[1, 1, 0], &[0, 0, -1]],
        );
        assert!(cone_member(&v(&[3, 2, -1]), &x));
        assert!(!cone_member(&v(&[3, 2, 1]), &x));
        assert!(!cone_member(&v(&[-1, 0, 0]), &x));
    }

    #[test]
    fn certificate_passes_on_oracle_output() {
        let k = wedge();
        let own = dd_generators(&k, &OracleLimits::default()).unwrap();
        let cert = verify_conversion(&k, &own, &VerifyOptions::default());
        assert!(cert.passed());
        assert!(cert.reverse_ok());
    }

    #[test]
    fn certificate_detects_missing_ray() {
        let cert = verify_conversion(&wedge(), &gens(2, &[&[0, 1]]), &VerifyOptions::default());
        assert!(cert.soundness_ok());
        assert!(!cert.completeness_ok());
        let failing: Vec<_> = cert.completeness.iter().filter(|c| !c.ok).collect();
        assert_eq!(failing.len(), 1);
        assert_eq!(failing[0].vector, v(&[1, 1]));
    }

    #[test]
    fn certificate_detects_spurious_generator() {
        let cert = verify_conversion(
            &wedge(),
            &gens(2, &[&[0, 1], &[1, 1], &[1, 0]]),
            &VerifyOptions::default(),
        );
        assert!(!cert.soundness_ok());
        assert!(!cert.passed());
        let bad: Vec<_> = cert.soundness.iter().filter(|c| !c.ok).collect();
        assert_eq!(bad[0].vector, v(&[1, 0]));
    }

    #[test]
    fn certificate_without_oracle_is_partial() {
        let options = VerifyOptions {
            limits: OracleLimits {
                max_dim: 1,
                ..OracleLimits::default()
            },
            ..VerifyOptions::default()
        };
        let cert = verify_conversion(&wedge(), &conic_generators(&wedge()), &options);
        assert!(cert.oracle_error.is_some());
        assert!(cert.soundness_ok());
        assert!(!cert.passed());
    }

    #[test]
    fn qsd_report_falls_back_to_hadamard() {
        let k = cone(2, &[&[-1, 0], &[1, -1]], &[]);
        let x = gens(2, &[&[0, 1], &[7, 7], &[100, 1]]);
        let exact = qsd_report(&k.stacked(), &x, DEFAULT_ENUMERATION_CAP);
        assert_eq!(exact.method, QsdMethod::Enumeration);
        assert_eq!(exact.non_members, 3);
        let screened = qsd_report(&k.stacked(), &x, 1);
        assert_eq!(screened.method, QsdMethod::HadamardBound);
        assert!(screened.non_members >= 1);
        assert_eq!(screened.members, 0);
    }

    #[test]
    fn dichotomy_examples() {
        assert!(check_dichotomy(&cone(2, &[], &[&[1, 0]])));
        assert!(check_dichotomy(&wedge()));
        assert!(check_dichotomy(&cone(2, &[&[1, 0]], &[])));
        assert!(check_dichotomy(&HCone::whole_space(3).unwrap()));
        assert!(!classify(&wedge()).is_direct());
    }

    #[test]
    fn gauss_rank_agrees_on_examples() {
        assert_eq!(gauss_rank(&RatMatrix::from_i64(2, &[&[1, 1], &[2, 2]])), 1);
        assert_eq!(gauss_rank(&RatMatrix::identity(3)), 3);
        assert_eq!(gauss_rank(&RatMatrix::empty(4)), 0);
    }
}
