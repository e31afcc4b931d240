//! Polyhedra in outer form `{x : Ax ≤ b}` and inner form `conv(V) + cone(W)`,
//! converted through the cone engine.
//!
//! H to V homogenizes `P` into `{(x, t) : Ax - tb ≤ 0, -t ≤ 0}` and reads
//! generators with `t > 0` as points and `t = 0` as rays. V to H lifts the
//! generators to `(v, 1)` and `(w, 0)`, converts the polar cone
//! `{y : Gy ≤ 0}`, and turns each polar generator `(c, d)` into `⟨c, x⟩ ≤ -d`.

use std::collections::BTreeSet;

use num_traits::{One, Signed, Zero};

use crate::cone::{convert, ConversionOptions, GeneratorSet, HCone};
use crate::error::{Error, Result};
use crate::linalg::{RatMatrix, RatVector, Rational};
use crate::verify::cone_member;

/// `{x ∈ R^n : Ax ≤ b}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct HPolyhedron {
    a: RatMatrix,
    b: RatVector,
}

impl HPolyhedron {
    pub fn new(a: RatMatrix, b: RatVector) -> Result<Self> {
        if a.rows() != b.dim() {
            return Err(Error::DimensionMismatch {
                expected: a.rows(),
                found: b.dim(),
            });
        }
        Ok(Self { a, b })
    }

    /// Builds from rows `(a_1, …, a_n, b)` meaning `⟨a, x⟩ ≤ b`.
    pub fn from_i64_rows(dim: usize, rows: &[&[i64]]) -> Self {
        let mut a = Vec::new();
        let mut b = Vec::new();
        for row in rows {
            assert_eq!(
                row.len(),
                dim + 1,
                "row needs {dim} coefficients and a bound"
            );
            a.push(RatVector::from_i64(&row[..dim]));
            b.push(crate::linalg::rat(row[dim]));
        }
        Self::new(
            RatMatrix::from_rows(dim, &a).expect("rows checked above"),
            RatVector::new(b),
        )
        .expect("one bound per row")
    }

    pub fn dim(&self) -> usize {
        self.a.cols()
    }

    pub fn matrix(&self) -> &RatMatrix {
        &self.a
    }

    pub fn rhs(&self) -> &RatVector {
        &self.b
    }

    pub fn contains(&self, x: &RatVector) -> bool {
        x.dim() == self.dim()
            && self
                .a
                .mul_vec(x)
                .iter()
                .zip(self.b.iter())
                .all(|(ax, b)| ax <= b)
    }

    /// `Aw ≤ 0`, i.e. `w` is a recession direction.
    pub fn recedes_along(&self, w: &RatVector) -> bool {
        w.dim() == self.dim() && self.a.mul_vec(w).iter().all(|e| !e.is_positive())
    }
}

/// `conv(V) + cone(W)`. `conv(∅) = ∅`, so an empty `V` means the empty set
/// unless rays are given, in which case the origin is the implied point.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct VPolyhedron {
    dim: usize,
    points: BTreeSet<RatVector>,
    rays: BTreeSet<RatVector>,
}

impl VPolyhedron {
    pub fn new(
        dim: usize,
        points: impl IntoIterator<Item = RatVector>,
        rays: impl IntoIterator<Item = RatVector>,
    ) -> Result<Self> {
        let mut out = Self {
            dim,
            ..Self::default()
        };
        for p in points {
            out.check_dim(&p)?;
            out.points.insert(p);
        }
        for r in rays {
            out.check_dim(&r)?;
            if !r.is_zero() {
                out.rays.insert(r);
            }
        }
        Ok(out)
    }

    pub fn empty(dim: usize) -> Self {
        Self {
            dim,
            ..Self::default()
        }
    }

    fn check_dim(&self, v: &RatVector) -> Result<()> {
        if v.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: v.dim(),
            });
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn points(&self) -> impl Iterator<Item = &RatVector> {
        self.points.iter()
    }

    pub fn rays(&self) -> impl Iterator<Item = &RatVector> {
        self.rays.iter()
    }

    pub fn num_points(&self) -> usize {
        self.points.len()
    }

    pub fn num_rays(&self) -> usize {
        self.rays.len()
    }

    /// True when neither points nor rays are given.
    pub fn is_empty(&self) -> bool {
        self.points.is_empty() && self.rays.is_empty()
    }

    /// Points actually used: the origin stands in when only rays are given.
    fn effective_points(&self) -> Vec<RatVector> {
        if self.points.is_empty() && !self.rays.is_empty() {
            vec![RatVector::zeros(self.dim)]
        } else {
            self.points.iter().cloned().collect()
        }
    }

    /// Lifted generators `(v, 1)` and `(w, 0)` in `R^{n+1}`.
    pub fn lifted(&self) -> GeneratorSet {
        let mut out = GeneratorSet::new(self.dim + 1);
        for p in self.effective_points() {
            let mut v = p;
            v.push(Rational::one());
            out.insert(v).expect("lifted dimension");
        }
        for r in &self.rays {
            let mut w = r.clone();
            w.push(Rational::zero());
            out.insert(w).expect("lifted dimension");
        }
        out
    }

    /// Exact membership `x ∈ conv(V) + cone(W)`.
    pub fn contains(&self, x: &RatVector) -> bool {
        if self.is_empty() || x.dim() != self.dim {
            return false;
        }
        let mut lifted_x = x.clone();
        lifted_x.push(Rational::one());
        cone_member(&lifted_x, &self.lifted())
    }
}

/// `{(x, t) : Ax - tb ≤ 0, -t ≤ 0}` with an empty equation block.
pub fn homogenize(p: &HPolyhedron) -> HCone {
    let n = p.dim();
    let mut rows = Vec::with_capacity(p.a.rows() + 1);
    for (i, row) in p.a.row_vectors().enumerate() {
        let mut r = row;
        r.push(-&p.b[i]);
        rows.push(r);
    }
    let mut last = RatVector::zeros(n);
    last.push(-Rational::one());
    rows.push(last);
    HCone::from_inequalities(RatMatrix::from_rows(n + 1, &rows).expect("uniform rows"))
        .expect("dimension n + 1 ≥ 1")
}

/// Splits lifted generators into points (`t > 0`, scaled to `t = 1`) and rays (`t = 0`).
/// Without any point the result is empty, rays included.
pub fn dehomogenize(generators: &GeneratorSet) -> Result<VPolyhedron> {
    let lifted_dim = generators.dim();
    if lifted_dim == 0 {
        return Err(Error::Input(
            "lifted generators need dimension at least 1".into(),
        ));
    }
    let n = lifted_dim - 1;
    let mut points = Vec::new();
    let mut rays = Vec::new();
    for g in generators.iter() {
        let t = &g[n];
        if t.is_negative() {
            return Err(Error::Input(format!(
                "generator {g} has negative homogenizing coordinate"
            )));
        }
        if t.is_zero() {
            rays.push(g.head(n));
        } else {
            points.push(g.head(n).scaled(&t.recip()));
        }
    }
    if points.is_empty() {
        return Ok(VPolyhedron::empty(n));
    }
    VPolyhedron::new(n, points, rays)
}

/// Inner description of `P`.
pub fn h_to_v(p: &HPolyhedron) -> VPolyhedron {
    h_to_v_with(p, ConversionOptions::default())
}

pub fn h_to_v_with(p: &HPolyhedron, options: ConversionOptions) -> VPolyhedron {
    let generators = convert(&homogenize(p), options).generators;
    dehomogenize(&generators).expect("homogenized cones satisfy t ≥ 0")
}

/// The cone `{y ∈ R^{n+1} : ⟨(v,1), y⟩ ≤ 0, ⟨(w,0), y⟩ ≤ 0}` polar to the lifted generators.
pub fn polar_cone(q: &VPolyhedron) -> Result<HCone> {
    if q.is_empty() {
        return Err(Error::Input(
            "empty inner description has no outer form here".into(),
        ));
    }
    let rows = q.lifted().to_vec();
    HCone::from_inequalities(RatMatrix::from_rows(q.dim() + 1, &rows)?)
}

/// Outer description of `Q`, one inequality per polar generator.
pub fn v_to_h(q: &VPolyhedron) -> Result<HPolyhedron> {
    v_to_h_with(q, ConversionOptions::default())
}

pub fn v_to_h_with(q: &VPolyhedron, options: ConversionOptions) -> Result<HPolyhedron> {
    let n = q.dim();
    let polar = convert(&polar_cone(q)?, options).generators;
    let mut a = Vec::with_capacity(polar.len());
    let mut b = Vec::with_capacity(polar.len());
    for y in polar.iter() {
        a.push(y.head(n));
        b.push(-&y[n]);
    }
    HPolyhedron::new(RatMatrix::from_rows(n, &a)?, RatVector::new(b))
}

fn inner_within(q: &VPolyhedron, p: &HPolyhedron) -> bool {
    q.is_empty() || (q.points().all(|v| p.contains(v)) && q.rays().all(|w| p.recedes_along(w)))
}

/// Semantic equality of two outer descriptions by mutual containment.
pub fn h_equal(p1: &HPolyhedron, p2: &HPolyhedron) -> Result<bool> {
    if p1.dim() != p2.dim() {
        return Err(Error::DimensionMismatch {
            expected: p1.dim(),
            found: p2.dim(),
        });
    }
    Ok(inner_within(&h_to_v(p1), p2) && inner_within(&h_to_v(p2), p1))
}

/// Semantic equality of two inner descriptions via their lifted cones.
pub fn v_equal(q1: &VPolyhedron, q2: &VPolyhedron) -> Result<bool> {
    if q1.dim() != q2.dim() {
        return Err(Error::DimensionMismatch {
            expected: q1.dim(),
            found: q2.dim(),
        });
    }
    if q1.is_empty() || q2.is_empty() {
        return Ok(q1.is_empty() && q2.is_empty());
    }
    let (l1, l2) = (q1.lifted(), q2.lifted());
    Ok(l1.iter().all(|g| cone_member(g, &l2)) && l2.iter().all(|g| cone_member(g, &l1)))
}
