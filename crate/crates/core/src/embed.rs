//! Projective systems from geometry payloads.
//!
//! The embedding maps every point of a built geometry to a normalized
//! vector in an ambient space: Grassmann coordinates for subspace points,
//! a twisted tensor product for pair points. The resulting list of vectors
//! in geometry point order is a [`ProjectiveSystem`].
//!
//! The system also fixes coordinates. The first points whose vectors are
//! linearly independent form the span basis; every point is re-expressed in
//! this basis, and the columns of [`ProjectiveSystem::generator_matrix`]
//! are exactly these coordinate vectors. A functional on the coordinate
//! space lifts through [`ProjectiveSystem::lift_functional`] to an ambient
//! functional inducing the same values on every point, which ties words of
//! the code to hyperplane sections of the image.

use std::collections::HashSet;
use std::sync::Arc;

use thiserror::Error;

use crate::gf::{Fe, Field, GfError};
use crate::linalg::{normalize_projective, plucker, LinalgError, Matrix};
use crate::zoo::{BuiltGeometry, Payload};

#[derive(Debug, Error)]
pub enum EmbedError {
    #[error("a projective system needs at least one point")]
    Empty,
    #[error("point {0} is the zero vector")]
    ZeroPoint(usize),
    #[error("point {0} has the wrong length")]
    RaggedPoint(usize),
    #[error(transparent)]
    Field(#[from] GfError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error("parse error: {0}")]
    Parse(String),
}

/// The span basis of a system: which points it uses and how to re-express
/// ambient vectors in it.
#[derive(Debug, Clone)]
struct SpanBasis {
    /// Indices of the first linearly independent points, in point order.
    point_indices: Vec<usize>,
    /// Reduced row echelon form of the basis points, `K x ambient`.
    rref_rows: Matrix,
    pivots: Vec<usize>,
    /// `K x K` change of basis with `transform * basis_points = rref_rows`.
    transform: Matrix,
}

/// A finite list of normalized projective points spanning a subspace of
/// `F_q^ambient`, in a fixed order.
#[derive(Debug, Clone)]
pub struct ProjectiveSystem {
    field: Arc<Field>,
    ambient_dim: usize,
    points: Vec<Vec<Fe>>,
    span: SpanBasis,
}

/// Validation summary of one embedding.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub struct EmbeddingReport {
    /// Distinct geometry points have distinct images.
    pub injective: bool,
    /// The images span the whole ambient space.
    pub spans_ambient: bool,
    /// Every geometry line maps onto a full projective line.
    pub lines_to_lines: bool,
    /// Dimension of the span of the image.
    pub dimension: usize,
}

impl ProjectiveSystem {
    /// Normalizes the points and fixes the span basis.
    pub fn new(
        field: Arc<Field>,
        ambient_dim: usize,
        points: Vec<Vec<Fe>>,
    ) -> Result<ProjectiveSystem, EmbedError> {
        if points.is_empty() {
            return Err(EmbedError::Empty);
        }
        let mut normalized = points;
        for (i, p) in normalized.iter_mut().enumerate() {
            if p.len() != ambient_dim {
                return Err(EmbedError::RaggedPoint(i));
            }
            normalize_projective(&field, p).map_err(|_| EmbedError::ZeroPoint(i))?;
        }
        let span = span_basis(&field, ambient_dim, &normalized)?;
        Ok(ProjectiveSystem { field, ambient_dim, points: normalized, span })
    }

    /// Embeds a built geometry, reading the twist exponent from its
    /// descriptor. Subspace points receive Grassmann coordinates; pair
    /// points the tensor product with the right factor twisted.
    pub fn from_geometry(built: &BuiltGeometry) -> Result<ProjectiveSystem, EmbedError> {
        let field = built.field.clone();
        let sigma = built.descriptor.sigma.unwrap_or(0);
        let (ambient, vectors) = match &built.payload {
            Payload::Subspaces(subs) => {
                let first = subs.first().ok_or(EmbedError::Empty)?;
                let n = first.ambient_dim() as u64;
                let k = first.dim() as u64;
                let ambient = binomial(n, k) as usize;
                let vectors: Vec<Vec<Fe>> = subs.iter().map(plucker).collect();
                (ambient, vectors)
            }
            Payload::Tensor { left, right, pairs } => {
                let da = left.first().map(|v| v.len()).ok_or(EmbedError::Empty)?;
                let db = right.first().map(|v| v.len()).ok_or(EmbedError::Empty)?;
                let vectors: Vec<Vec<Fe>> = pairs
                    .iter()
                    .map(|&(i, j)| {
                        let a = &left[i as usize];
                        let b = &right[j as usize];
                        let mut v = Vec::with_capacity(da * db);
                        for &ai in a {
                            for &bj in b {
                                v.push(field.mul(ai, field.frobenius(bj, sigma)));
                            }
                        }
                        v
                    })
                    .collect();
                (da * db, vectors)
            }
        };
        ProjectiveSystem::new(field, ambient, vectors)
    }

    pub fn field(&self) -> &Arc<Field> {
        &self.field
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn num_points(&self) -> usize {
        self.points.len()
    }

    pub fn points(&self) -> &[Vec<Fe>] {
        &self.points
    }

    /// Dimension of the span, the length `K` of coordinate vectors.
    pub fn span_dim(&self) -> usize {
        self.span.point_indices.len()
    }

    /// Indices of the points forming the span basis.
    pub fn basis_point_indices(&self) -> &[usize] {
        &self.span.point_indices
    }

    /// Coordinates of point `i` with respect to the span basis.
    ///
    /// Panics when the stored point leaves the span, which would mean the
    /// basis selection invariant is broken.
    pub fn coordinates(&self, i: usize) -> Vec<Fe> {
        let v = &self.points[i];
        let f = &self.field;
        let k = self.span_dim();
        let r = &self.span.rref_rows;
        // Coordinates against the echelon rows are read off the pivots.
        let c_r: Vec<Fe> = self.span.pivots.iter().map(|&pc| v[pc]).collect();
        // The residual must vanish: every point lies in the span.
        for j in 0..self.ambient_dim {
            let mut acc = Fe::ZERO;
            for (row, &c) in c_r.iter().enumerate() {
                acc = f.add(acc, f.mul(c, r.get(row, j)));
            }
            assert_eq!(acc, v[j], "point {i} is outside the span basis");
        }
        let mut out = vec![Fe::ZERO; k];
        for (row, &c) in c_r.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for j in 0..k {
                let t = f.mul(c, self.span.transform.get(row, j));
                out[j] = f.add(out[j], t);
            }
        }
        out
    }

    /// The `K x N` generator matrix whose column `i` is `coordinates(i)`.
    pub fn generator_matrix(&self) -> Matrix {
        let k = self.span_dim();
        let n = self.num_points();
        let mut g = Matrix::zero(self.field.clone(), k, n);
        for i in 0..n {
            for (r, c) in self.coordinates(i).into_iter().enumerate() {
                g.set(r, i, c);
            }
        }
        g
    }

    /// Lifts a functional on coordinates to an ambient functional with the
    /// same values on every point of the system.
    pub fn lift_functional(&self, mu: &[Fe]) -> Vec<Fe> {
        assert_eq!(mu.len(), self.span_dim(), "functional length mismatch");
        let f = &self.field;
        let mut xi = vec![Fe::ZERO; self.ambient_dim];
        for (r, &pc) in self.span.pivots.iter().enumerate() {
            let mut acc = Fe::ZERO;
            for (j, &m) in mu.iter().enumerate() {
                acc = f.add(acc, f.mul(m, self.span.transform.get(r, j)));
            }
            xi[pc] = acc;
        }
        xi
    }

    /// Membership mask of the points annihilated by an ambient functional.
    pub fn hyperplane_preimage(&self, xi: &[Fe]) -> Vec<bool> {
        let f = &self.field;
        self.points
            .iter()
            .map(|p| {
                let mut acc = Fe::ZERO;
                for (&a, &b) in xi.iter().zip(p) {
                    acc = f.add(acc, f.mul(a, b));
                }
                acc.is_zero()
            })
            .collect()
    }

    /// Plain text dump: `ambient D points N q Q` then one point per line.
    pub fn dump(&self) -> String {
        let mut out = format!(
            "ambient {} points {} q {}\n",
            self.ambient_dim,
            self.num_points(),
            self.field.q()
        );
        for p in &self.points {
            let line: Vec<String> = p.iter().map(|e| e.index().to_string()).collect();
            out.push_str(&line.join(" "));
            out.push('\n');
        }
        out
    }

    /// Parses the [`ProjectiveSystem::dump`] format, rebuilding the field
    /// from the order in the header.
    pub fn parse(text: &str) -> Result<ProjectiveSystem, EmbedError> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header = lines.next().ok_or_else(|| EmbedError::Parse("empty input".into()))?;
        let tokens: Vec<&str> = header.split_whitespace().collect();
        let [kw_a, d, kw_p, n, kw_q, q] = tokens.as_slice() else {
            return Err(EmbedError::Parse(format!("bad header {header:?}")));
        };
        if *kw_a != "ambient" || *kw_p != "points" || *kw_q != "q" {
            return Err(EmbedError::Parse(format!("bad header {header:?}")));
        }
        let parse_num = |t: &str| {
            t.parse::<u64>().map_err(|_| EmbedError::Parse(format!("bad number {t:?}")))
        };
        let ambient = parse_num(d)? as usize;
        let num_points = parse_num(n)? as usize;
        let field = Field::from_order(parse_num(q)?)?;
        let mut points = Vec::with_capacity(num_points);
        for line in lines {
            let p: Vec<Fe> = line
                .split_whitespace()
                .map(|t| {
                    parse_num(t).and_then(|i| {
                        field.element(i as u32).map_err(EmbedError::Field)
                    })
                })
                .collect::<Result<_, _>>()?;
            points.push(p);
        }
        if points.len() != num_points {
            return Err(EmbedError::Parse(format!(
                "header promises {num_points} points, found {}",
                points.len()
            )));
        }
        ProjectiveSystem::new(field, ambient, points)
    }
}

/// Selects the first linearly independent points and computes the change
/// of basis via an augmented echelon reduction.
fn span_basis(
    field: &Arc<Field>,
    ambient_dim: usize,
    points: &[Vec<Fe>],
) -> Result<SpanBasis, EmbedError> {
    let mut indices: Vec<usize> = Vec::new();
    let mut work: Vec<Vec<Fe>> = Vec::new();
    let mut work_pivots: Vec<usize> = Vec::new();
    for (i, p) in points.iter().enumerate() {
        let mut v = p.clone();
        for (r, &pc) in work_pivots.iter().enumerate() {
            if v[pc].is_zero() {
                continue;
            }
            let c = v[pc];
            for j in 0..ambient_dim {
                let t = field.mul(c, work[r][j]);
                v[j] = field.sub(v[j], t);
            }
        }
        let Some(lead) = v.iter().position(|e| !e.is_zero()) else { continue };
        indices.push(i);
        let inv = field.inv(v[lead])?;
        for e in v.iter_mut() {
            *e = field.mul(inv, *e);
        }
        for row in work.iter_mut() {
            if row[lead].is_zero() {
                continue;
            }
            let c = row[lead];
            for j in 0..ambient_dim {
                let t = field.mul(c, v[j]);
                row[j] = field.sub(row[j], t);
            }
        }
        let pos = work_pivots.iter().position(|&pc| pc > lead).unwrap_or(work.len());
        work.insert(pos, v);
        work_pivots.insert(pos, lead);
        if work.len() == ambient_dim {
            // The span is already everything; later points cannot add rank.
            break;
        }
    }

    // Re-derive the echelon form together with the change of basis from
    // the selected points, via one augmented reduction.
    let k = indices.len();
    let mut aug = Matrix::zero(field.clone(), k, ambient_dim + k);
    for (r, &i) in indices.iter().enumerate() {
        for (j, &e) in points[i].iter().enumerate() {
            aug.set(r, j, e);
        }
        aug.set(r, ambient_dim + r, Fe::ONE);
    }
    let (reduced, aug_pivots) = aug.rref();
    let pivots: Vec<usize> = aug_pivots.into_iter().take_while(|&c| c < ambient_dim).collect();
    assert_eq!(pivots.len(), k, "selected points are independent");
    let mut rref_rows = Matrix::zero(field.clone(), k, ambient_dim);
    let mut transform = Matrix::zero(field.clone(), k, k);
    for r in 0..k {
        for j in 0..ambient_dim {
            rref_rows.set(r, j, reduced.get(r, j));
        }
        for j in 0..k {
            transform.set(r, j, reduced.get(r, ambient_dim + j));
        }
    }
    Ok(SpanBasis { point_indices: indices, rref_rows, pivots, transform })
}

/// Validates an embedding against its source geometry.
pub fn validate_embedding(built: &BuiltGeometry, sys: &ProjectiveSystem) -> EmbeddingReport {
    let distinct: HashSet<&Vec<Fe>> = sys.points().iter().collect();
    let injective = distinct.len() == sys.num_points();
    let spans_ambient = sys.span_dim() == sys.ambient_dim();
    let q = sys.field().q() as usize;
    let lines_to_lines = built.geometry.lines().iter().all(|line| {
        let image: HashSet<&Vec<Fe>> =
            line.iter().map(|&p| &sys.points()[p as usize]).collect();
        if image.len() != q + 1 {
            return false;
        }
        let rows: Vec<Vec<Fe>> = image.into_iter().cloned().collect();
        crate::linalg::span_dimension(sys.field(), &rows) == 2
    });
    EmbeddingReport {
        injective,
        spans_ambient,
        lines_to_lines,
        dimension: sys.span_dim(),
    }
}

fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let mut result = 1u64;
    for i in 0..k.min(n - k) {
        result = result * (n - i) / (i + 1);
    }
    result
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zoo;
    use crate::Caps;

    fn f(p: u32, h: u32) -> Arc<Field> {
        Field::new(p, h).unwrap()
    }

    fn system(built: &BuiltGeometry) -> ProjectiveSystem {
        ProjectiveSystem::from_geometry(built).unwrap()
    }

    #[test]
    fn grassmann_4_2_f2_embedding() {
        let built = zoo::grassmann(&f(2, 1), 4, 2, &Caps::default()).unwrap();
        let sys = system(&built);
        assert_eq!(sys.num_points(), 35);
        assert_eq!(sys.ambient_dim(), 6);
        assert_eq!(sys.span_dim(), 6);
        let report = validate_embedding(&built, &sys);
        assert!(report.injective);
        assert!(report.spans_ambient);
        assert!(report.lines_to_lines);
        assert_eq!(report.dimension, 6);
    }

    #[test]
    fn grassmann_hyperplane_section_is_geometric() {
        let built = zoo::grassmann(&f(2, 1), 4, 2, &Caps::default()).unwrap();
        let sys = system(&built);
        // The functional picking the first Grassmann coordinate.
        let mut xi = vec![Fe::ZERO; 6];
        xi[0] = Fe::ONE;
        let member = sys.hyperplane_preimage(&xi);
        assert_eq!(member.iter().filter(|&&m| m).count(), 19);
        assert!(built.geometry.is_geometric_hyperplane(&member).unwrap());
        assert!(built.geometry.complement_connected(&member).unwrap());
    }

    #[test]
    fn coordinates_solve_the_span_exactly() {
        let built = zoo::grassmann(&f(3, 1), 4, 2, &Caps::default()).unwrap();
        let sys = system(&built);
        let field = sys.field().clone();
        let k = sys.span_dim();
        // Reassembling every point from its coordinates must reproduce it.
        let basis: Vec<Vec<Fe>> = sys
            .basis_point_indices()
            .iter()
            .map(|&i| sys.points()[i].clone())
            .collect();
        for i in 0..sys.num_points() {
            let c = sys.coordinates(i);
            let mut v = vec![Fe::ZERO; sys.ambient_dim()];
            for (r, &cr) in c.iter().enumerate() {
                for j in 0..v.len() {
                    let t = field.mul(cr, basis[r][j]);
                    v[j] = field.add(v[j], t);
                }
            }
            assert_eq!(&v, &sys.points()[i]);
        }
        // Basis points get unit coordinate vectors.
        for (r, &i) in sys.basis_point_indices().iter().enumerate() {
            let c = sys.coordinates(i);
            for (j, &e) in c.iter().enumerate() {
                assert_eq!(e, if j == r { Fe::ONE } else { Fe::ZERO });
            }
        }
        assert_eq!(k, 6);
    }

    #[test]
    fn lifted_functionals_agree_on_all_points() {
        let built = zoo::symplectic(&f(3, 1), 2, 2, &Caps::default()).unwrap();
        let sys = system(&built);
        let field = sys.field().clone();
        let k = sys.span_dim();
        for r in 0..k {
            let mut mu = vec![Fe::ZERO; k];
            mu[r] = Fe::ONE;
            let xi = sys.lift_functional(&mu);
            for i in 0..sys.num_points() {
                let via_coords = {
                    let c = sys.coordinates(i);
                    c[r]
                };
                let via_ambient = {
                    let mut acc = Fe::ZERO;
                    for (&a, &b) in xi.iter().zip(&sys.points()[i]) {
                        acc = field.add(acc, field.mul(a, b));
                    }
                    acc
                };
                assert_eq!(via_coords, via_ambient);
            }
        }
    }

    #[test]
    fn point_hyperplane_span_drops_by_one_untwisted() {
        let built = zoo::point_hyperplane(&f(2, 1), 2, 0, &Caps::default()).unwrap();
        let sys = system(&built);
        assert_eq!(sys.num_points(), 21);
        assert_eq!(sys.ambient_dim(), 9);
        // Incident pairs have zero trace, so the image spans a hyperplane.
        assert_eq!(sys.span_dim(), 8);
        let report = validate_embedding(&built, &sys);
        assert!(report.injective);
        assert!(!report.spans_ambient);
        assert!(report.lines_to_lines);
    }

    #[test]
    fn point_hyperplane_twisted_spans_everything() {
        let built = zoo::point_hyperplane(&f(2, 2), 2, 1, &Caps::default()).unwrap();
        let sys = system(&built);
        assert_eq!(sys.num_points(), 105);
        assert_eq!(sys.span_dim(), 9);
        let report = validate_embedding(&built, &sys);
        assert!(report.injective);
        assert!(report.spans_ambient);
        assert!(report.lines_to_lines);
    }

    #[test]
    fn segre_embedding_is_projective() {
        let built = zoo::segre(&f(2, 1), 1, 1, 0, &Caps::default()).unwrap();
        let sys = system(&built);
        assert_eq!(sys.num_points(), 9);
        assert_eq!(sys.span_dim(), 4);
        let report = validate_embedding(&built, &sys);
        assert!(report.injective && report.spans_ambient && report.lines_to_lines);
    }

    #[test]
    fn thin_and_substructure_lines_are_not_projective_lines() {
        // Hyperbolic dual polar lines have two points.
        let built = zoo::orthogonal_plus(&f(2, 1), 3, 3, &Caps::default()).unwrap();
        let sys = system(&built);
        let report = validate_embedding(&built, &sys);
        assert!(report.injective);
        assert!(!report.lines_to_lines);
        // Hermitian dual polar lines on even dimension are Baer sublines:
        // three points of a line over F_4.
        let built = zoo::hermitian(&f(2, 2), 4, 2, &Caps::default()).unwrap();
        let sys = system(&built);
        let report = validate_embedding(&built, &sys);
        assert!(report.injective);
        assert!(!report.lines_to_lines);
        assert_eq!(report.dimension, 6);
    }

    #[test]
    fn hermitian_odd_line_images_span_planes() {
        let built = zoo::hermitian(&f(2, 2), 5, 2, &Caps::default()).unwrap();
        let sys = system(&built);
        assert_eq!(sys.span_dim(), 10);
        let report = validate_embedding(&built, &sys);
        assert!(report.injective);
        assert!(report.spans_ambient);
        assert!(!report.lines_to_lines);
        // Each line image is a Hermitian curve spanning a plane.
        let line = &built.geometry.lines()[0];
        let rows: Vec<Vec<Fe>> =
            line.iter().map(|&p| sys.points()[p as usize].clone()).collect();
        assert_eq!(crate::linalg::span_dimension(sys.field(), &rows), 3);
    }

    #[test]
    fn dump_round_trip() {
        let built = zoo::segre(&f(2, 1), 1, 1, 0, &Caps::default()).unwrap();
        let sys = system(&built);
        let text = sys.dump();
        assert!(text.starts_with("ambient 4 points 9 q 2\n"));
        let back = ProjectiveSystem::parse(&text).unwrap();
        assert_eq!(back.points(), sys.points());
        assert_eq!(back.span_dim(), sys.span_dim());
    }

    #[test]
    fn zero_points_are_rejected() {
        let field = f(2, 1);
        let err = ProjectiveSystem::new(
            field,
            3,
            vec![vec![Fe(1), Fe(0), Fe(0)], vec![Fe(0), Fe(0), Fe(0)]],
        )
        .unwrap_err();
        assert!(matches!(err, EmbedError::ZeroPoint(1)));
    }

    #[test]
    fn parse_validates_the_header() {
        assert!(ProjectiveSystem::parse("").is_err());
        assert!(ProjectiveSystem::parse("ambient 3 points 2 q 2\n1 0 0\n").is_err());
        let ok = ProjectiveSystem::parse("ambient 3 points 2 q 2\n1 0 0\n0 1 0\n").unwrap();
        assert_eq!(ok.num_points(), 2);
        assert_eq!(ok.field().q(), 2);
    }
}
