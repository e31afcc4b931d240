//! Inequality-to-generator conversion for polyhedral cones.
//!
//! A cone `K = {x : Bx ≤ 0, Cx = 0}` either has a lineality space of
//! codimension at most one inside `ker C` (then it is a subspace or a
//! half-subspace and can be written down directly from kernel bases), or there
//! is a direction `z ∈ ker C` such that neither `z` nor `-z` lies in `K`.
//! In the second case every point of `K` is a convex combination of two points
//! on the sub-cones obtained by turning one inequality into an equation, so the
//! union of the generators of those sub-cones generates `K`.

use std::collections::BTreeSet;

use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{extend_basis, kernel_basis, rank, RatMatrix, RatVector, Rational};

/// `{x ∈ R^n : Bx ≤ 0, Cx = 0}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct HCone {
    ineq: RatMatrix,
    eq: RatMatrix,
}

impl HCone {
    pub fn new(ineq: RatMatrix, eq: RatMatrix) -> Result<Self> {
        if ineq.cols() != eq.cols() {
            return Err(Error::DimensionMismatch {
                expected: ineq.cols(),
                found: eq.cols(),
            });
        }
        if ineq.cols() == 0 {
            return Err(Error::Input("ambient dimension must be at least 1".into()));
        }
        Ok(Self { ineq, eq })
    }

    /// Cone given by inequalities only.
    pub fn from_inequalities(ineq: RatMatrix) -> Result<Self> {
        let n = ineq.cols();
        Self::new(ineq, RatMatrix::empty(n))
    }

    pub fn whole_space(dim: usize) -> Result<Self> {
        Self::new(RatMatrix::empty(dim), RatMatrix::empty(dim))
    }

    pub fn dim(&self) -> usize {
        self.ineq.cols()
    }

    /// The inequality block `B`.
    pub fn inequalities(&self) -> &RatMatrix {
        &self.ineq
    }

    /// The equation block `C`.
    pub fn equations(&self) -> &RatMatrix {
        &self.eq
    }

    /// `A = (B; C)`.
    pub fn stacked(&self) -> RatMatrix {
        self.ineq
            .stack(&self.eq)
            .expect("blocks share the column count")
    }

    pub fn contains(&self, x: &RatVector) -> bool {
        x.dim() == self.dim()
            && self.ineq.mul_vec(x).iter().all(|e| !e.is_positive())
            && self.eq.mul_vec(x).is_zero()
    }

    /// Turns inequality `i` (zero based) into an equation appended to `C`.
    pub fn restrict_row(&self, i: usize) -> Result<HCone> {
        let row = if i < self.ineq.rows() {
            self.ineq.row(i)
        } else {
            return Err(Error::RowOutOfRange {
                index: i,
                rows: self.ineq.rows(),
            });
        };
        Ok(Self {
            ineq: self.ineq.without_row(i)?,
            eq: self.eq.with_row(&row)?,
        })
    }
}

/// Finite set of vectors read as its conic hull. The zero vector is never stored.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GeneratorSet {
    dim: usize,
    vectors: BTreeSet<RatVector>,
}

impl GeneratorSet {
    pub fn new(dim: usize) -> Self {
        Self {
            dim,
            vectors: BTreeSet::new(),
        }
    }

    pub fn from_vectors(dim: usize, vectors: impl IntoIterator<Item = RatVector>) -> Result<Self> {
        let mut set = Self::new(dim);
        for v in vectors {
            set.insert(v)?;
        }
        Ok(set)
    }

    /// Inserts `v`; returns whether the set changed. Zero vectors are dropped.
    pub fn insert(&mut self, v: RatVector) -> Result<bool> {
        if v.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: v.dim(),
            });
        }
        if v.is_zero() {
            return Ok(false);
        }
        Ok(self.vectors.insert(v))
    }

    pub fn extend(&mut self, other: GeneratorSet) {
        debug_assert_eq!(self.dim, other.dim);
        self.vectors.extend(other.vectors);
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    /// Vectors in ascending lexicographic order.
    pub fn iter(&self) -> impl Iterator<Item = &RatVector> {
        self.vectors.iter()
    }

    pub fn contains(&self, v: &RatVector) -> bool {
        self.vectors.contains(v)
    }

    /// Each vector replaced by its primitive integer direction, then deduplicated.
    pub fn canonicalized(&self) -> GeneratorSet {
        Self {
            dim: self.dim,
            vectors: self
                .vectors
                .iter()
                .map(RatVector::primitive_direction)
                .collect(),
        }
    }

    pub fn to_vec(&self) -> Vec<RatVector> {
        self.vectors.iter().cloned().collect()
    }
}

/// Outcome of the subspace / split dichotomy for one cone.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CaseAnalysis {
    /// `dim(ker B ∩ ker C) ≥ dim(ker C) - 1`; the cone is generated directly.
    Direct {
        generators: GeneratorSet,
        /// Basis of `U = ker B ∩ ker C`.
        inner_basis: Vec<RatVector>,
        /// Oriented extension `v` with `K = U + cone(v)`, absent when `K = U`.
        extension: Option<RatVector>,
    },
    /// `z ∈ ker C` with `Bz` having entries of both signs.
    Split { z: RatVector },
}

impl CaseAnalysis {
    pub fn is_direct(&self) -> bool {
        matches!(self, CaseAnalysis::Direct { .. })
    }
}

fn kernel_dim(m: &RatMatrix) -> usize {
    m.cols() - rank(m)
}

pub fn classify(cone: &HCone) -> CaseAnalysis {
    let n = cone.dim();
    let stacked = cone.stacked();
    let inner = kernel_basis(&stacked);
    let ker_c = kernel_dim(cone.equations());

    if inner.len() + 1 < ker_c {
        let z = find_separating_z(cone).expect("dimension gap of at least two");
        return CaseAnalysis::Split { z };
    }

    let mut generators = GeneratorSet::new(n);
    for b in &inner {
        generators
            .insert(b.clone())
            .expect("kernel vectors have dimension n");
        generators
            .insert(-b)
            .expect("kernel vectors have dimension n");
    }

    let mut extension = None;
    if inner.len() + 1 == ker_c {
        let v = extend_basis(&inner, cone.equations()).expect("U is a hyperplane of ker C");
        let bv = cone.inequalities().mul_vec(&v);
        if bv.iter().all(|e| !e.is_positive()) {
            extension = Some(v);
        } else if bv.iter().all(|e| !e.is_negative()) {
            extension = Some(-v);
        }
        // otherwise Bv has mixed signs: only t = 0 keeps u + t v in K, so K = U
    }
    if let Some(v) = &extension {
        generators
            .insert(v.clone())
            .expect("extension has dimension n");
    }

    CaseAnalysis::Direct {
        generators,
        inner_basis: inner,
        extension,
    }
}

/// A vector `z ∈ ker C` orthogonal to `Bᵀ1` with `Bz ≠ 0`.
///
/// The entries of `Bz` sum to `⟨Bᵀ1, z⟩ = 0`, so `Bz` has entries of both
/// signs and neither `z` nor `-z` lies in the cone.
pub fn find_separating_z(cone: &HCone) -> Result<RatVector> {
    let stacked = cone.stacked();
    if kernel_dim(&stacked) + 1 >= kernel_dim(cone.equations()) {
        return Err(Error::Contract(
            "lineality has codimension at most one in ker C; the cone is generated directly".into(),
        ));
    }
    let b = cone.inequalities();
    let probe = cone.equations().with_row(&b.row_sum())?;
    kernel_basis(&probe)
        .into_iter()
        .find(|w| !b.mul_vec(w).is_zero())
        .ok_or_else(|| Error::Contract("no separating direction in ker C ∩ (Bᵀ1)⊥".into()))
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ConversionOptions {
    /// Replace every output vector by its primitive integer direction. This
    /// gives up the subdeterminant-quotient form of the components.
    pub canonical_rays: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum NodeCase {
    /// `K = U`, a linear subspace.
    Subspace,
    /// `K = U + cone(v)`.
    HalfSubspace,
    Split,
}

/// One node of the recursion tree. Row indices refer to the root's `B`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TraceNode {
    pub depth: usize,
    pub inequality_rows: Vec<usize>,
    pub equation_rows: Vec<usize>,
    pub case: NodeCase,
    pub z: Option<RatVector>,
    pub generators: usize,
    pub children: Vec<TraceNode>,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct RecursionStats {
    pub nodes: usize,
    pub leaves: usize,
    pub max_depth: usize,
    pub subspace_nodes: usize,
    pub half_subspace_nodes: usize,
    pub split_nodes: usize,
    /// Generators emitted summed over leaves, before deduplication.
    pub emitted: usize,
    pub output_size: usize,
}

impl TraceNode {
    pub fn stats(&self) -> RecursionStats {
        let mut stats = RecursionStats::default();
        self.accumulate(&mut stats);
        stats
    }

    fn accumulate(&self, stats: &mut RecursionStats) {
        stats.nodes += 1;
        stats.max_depth = stats.max_depth.max(self.depth);
        match self.case {
            NodeCase::Subspace => stats.subspace_nodes += 1,
            NodeCase::HalfSubspace => stats.half_subspace_nodes += 1,
            NodeCase::Split => stats.split_nodes += 1,
        }
        if self.children.is_empty() {
            stats.leaves += 1;
            stats.emitted += self.generators;
        }
        for child in &self.children {
            child.accumulate(stats);
        }
    }
}

/// Result of a traced conversion.
#[derive(Clone, Debug)]
pub struct Conversion {
    pub generators: GeneratorSet,
    pub trace: TraceNode,
}

impl Conversion {
    pub fn stats(&self) -> RecursionStats {
        let mut stats = self.trace.stats();
        stats.output_size = self.generators.len();
        stats
    }
}

/// Finite `X` with `cone(X) = K`; every component lies in `qsd(A)` unless
/// `canonical_rays` is set.
pub fn conic_generators(cone: &HCone) -> GeneratorSet {
    convert(cone, ConversionOptions::default()).generators
}

pub fn convert(cone: &HCone, options: ConversionOptions) -> Conversion {
    let rows: Vec<usize> = (0..cone.inequalities().rows()).collect();
    let (generators, trace) = recurse(cone, rows, Vec::new(), 0);
    let generators = if options.canonical_rays {
        generators.canonicalized()
    } else {
        generators
    };
    Conversion { generators, trace }
}

fn recurse(
    cone: &HCone,
    inequality_rows: Vec<usize>,
    equation_rows: Vec<usize>,
    depth: usize,
) -> (GeneratorSet, TraceNode) {
    match classify(cone) {
        CaseAnalysis::Direct {
            generators,
            extension,
            ..
        } => {
            let case = if extension.is_some() {
                NodeCase::HalfSubspace
            } else {
                NodeCase::Subspace
            };
            let node = TraceNode {
                depth,
                inequality_rows,
                equation_rows,
                case,
                z: None,
                generators: generators.len(),
                children: Vec::new(),
            };
            (generators, node)
        }
        CaseAnalysis::Split { z } => {
            let mut union = GeneratorSet::new(cone.dim());
            let mut children = Vec::with_capacity(inequality_rows.len());
            for (i, &original) in inequality_rows.iter().enumerate() {
                let sub = cone.restrict_row(i).expect("index below p");
                let mut sub_rows = inequality_rows.clone();
                sub_rows.remove(i);
                let mut sub_eqs = equation_rows.clone();
                sub_eqs.push(original);
                let (gens, child) = recurse(&sub, sub_rows, sub_eqs, depth + 1);
                union.extend(gens);
                children.push(child);
            }
            let node = TraceNode {
                depth,
                inequality_rows,
                equation_rows,
                case: NodeCase::Split,
                z: Some(z),
                generators: 0,
                children,
            };
            (union, node)
        }
    }
}

/// `x` written as a convex combination of two points on facet sub-cones.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decomposition {
    pub x: RatVector,
    pub z: RatVector,
    pub lambda_star: Rational,
    /// Row of `B` (zero based) that becomes tight at `x + λ* z`.
    pub i_star: usize,
    pub mu_star: Rational,
    /// Row of `B` (zero based) that becomes tight at `x - μ* z`.
    pub j_star: usize,
}

impl Decomposition {
    /// `x + λ* z`, a point of the sub-cone with row `i*` as an equation.
    pub fn upper_endpoint(&self) -> RatVector {
        self.x.add_scaled(&self.lambda_star, &self.z)
    }

    /// `x - μ* z`, a point of the sub-cone with row `j*` as an equation.
    pub fn lower_endpoint(&self) -> RatVector {
        self.x.add_scaled(&-&self.mu_star, &self.z)
    }

    /// Convex weights `(w_upper, w_lower)` with `x = w_upper·upper + w_lower·lower`.
    /// With `λ* = μ* = 0` both endpoints equal `x`; the weights are then `(1, 0)`.
    pub fn weights(&self) -> (Rational, Rational) {
        let total = &self.lambda_star + &self.mu_star;
        if total.is_zero() {
            return (Rational::from_integer(1.into()), Rational::zero());
        }
        (&self.mu_star / &total, &self.lambda_star / &total)
    }

    pub fn recombine(&self) -> RatVector {
        let (wu, wl) = self.weights();
        self.upper_endpoint()
            .scaled(&wu)
            .add_scaled(&wl, &self.lower_endpoint())
    }
}

/// Smallest ratio `-⟨b_i, x⟩ / ⟨b_i, d⟩` over rows with `⟨b_i, d⟩ > 0`; ties go to the lowest row.
fn min_step(b: &RatMatrix, x: &RatVector, d: &RatVector) -> Option<(Rational, usize)> {
    let bx = b.mul_vec(x);
    let bd = b.mul_vec(d);
    let mut best: Option<(Rational, usize)> = None;
    for i in 0..b.rows() {
        if !bd[i].is_positive() {
            continue;
        }
        let step = -&bx[i] / &bd[i];
        if best.as_ref().is_none_or(|(s, _)| step < *s) {
            best = Some((step, i));
        }
    }
    best
}

pub fn decompose_along_z(x: &RatVector, z: &RatVector, cone: &HCone) -> Result<Decomposition> {
    for v in [x, z] {
        if v.dim() != cone.dim() {
            return Err(Error::DimensionMismatch {
                expected: cone.dim(),
                found: v.dim(),
            });
        }
    }
    if !cone.contains(x) {
        return Err(Error::Input("x is not in the cone".into()));
    }
    if !cone.equations().mul_vec(z).is_zero() {
        return Err(Error::Input("z is not in ker C".into()));
    }
    let b = cone.inequalities();
    let (lambda_star, i_star) =
        min_step(b, x, z).ok_or_else(|| Error::Input("Bz has no positive entry".into()))?;
    let (mu_star, j_star) =
        min_step(b, x, &-z).ok_or_else(|| Error::Input("Bz has no negative entry".into()))?;
    Ok(Decomposition {
        x: x.clone(),
        z: z.clone(),
        lambda_star,
        i_star,
        mu_star,
        j_star,
    })
}
