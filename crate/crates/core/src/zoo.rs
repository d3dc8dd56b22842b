//! The catalog of supported point-line geometries.
//!
//! Every builder returns a [`BuiltGeometry`]: the abstract incidence
//! structure together with the algebraic payload that the embedding stage
//! consumes, and a [`Descriptor`] identifying the instance. Point order is
//! part of the contract because it fixes the column order of the resulting
//! code: subspace-type geometries list their points in the canonical
//! subspace enumeration order, and pair-type geometries list them with the
//! left index varying slowest.
//!
//! Polar geometries are built from standard forms on the full ambient
//! space. For `k` below the Witt index the lines are pencils inside
//! totally isotropic `(k+1)`-spaces; at the Witt index the geometry is the
//! dual polar space whose lines collect the generators through a common
//! `(k-1)`-space. Line sizes then depend on the form, not only on the
//! field, and [`BuiltGeometry::line_size`] records the uniform size found.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::gf::{Fe, Field, GfError};
use crate::geometry::{Geometry, GeometryError};
use crate::linalg::{enumerate_subspaces, LinalgError, Matrix, Subspace};
use crate::Caps;

#[derive(Debug, Error)]
pub enum ZooError {
    #[error("invalid parameters: {0}")]
    Parameter(String),
    #[error(transparent)]
    Field(#[from] GfError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

/// The geometry families the zoo can build.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    Grassmann,
    Symplectic,
    Orthogonal,
    OrthogonalPlus,
    HermitianOdd,
    HermitianEven,
    Segre,
    PointHyperplane,
}

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Family::Grassmann => "grassmann",
            Family::Symplectic => "symplectic",
            Family::Orthogonal => "orthogonal",
            Family::OrthogonalPlus => "orthogonal_plus",
            Family::HermitianOdd => "hermitian_odd",
            Family::HermitianEven => "hermitian_even",
            Family::Segre => "segre",
            Family::PointHyperplane => "point_hyperplane",
        }
    }
}

impl std::fmt::Display for Family {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Identifies one geometry instance: the family, the code alphabet, and
/// the family-specific parameters that are set.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Descriptor {
    pub family: Family,
    /// Order of the code alphabet.
    pub q: u32,
    pub p: u32,
    pub h: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m2: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sigma: Option<u32>,
}

impl Descriptor {
    fn bare(family: Family, field: &Field) -> Descriptor {
        Descriptor {
            family,
            q: field.q(),
            p: field.p(),
            h: field.h(),
            n: None,
            k: None,
            m: None,
            m2: None,
            sigma: None,
        }
    }

    /// Short human-readable label, e.g. `grassmann(n=4, k=2) over F_2`.
    pub fn label(&self) -> String {
        let mut params = Vec::new();
        if let Some(n) = self.n {
            params.push(format!("n={n}"));
        }
        if let Some(k) = self.k {
            params.push(format!("k={k}"));
        }
        if let Some(m) = self.m {
            params.push(format!("m={m}"));
        }
        if let Some(m2) = self.m2 {
            params.push(format!("m2={m2}"));
        }
        if let Some(s) = self.sigma {
            params.push(format!("sigma={s}"));
        }
        format!("{}({}) over F_{}", self.family, params.join(", "), self.q)
    }
}

/// Algebraic identity of the points, consumed by the embedding stage.
#[derive(Clone, Debug)]
pub enum Payload {
    /// Points are subspaces of `F_q^t`; the embedding takes Grassmann
    /// coordinates.
    Subspaces(Vec<Subspace>),
    /// Points are pairs of projective vectors; the embedding takes the
    /// tensor product, twisting the right factor.
    Tensor { left: Vec<Vec<Fe>>, right: Vec<Vec<Fe>>, pairs: Vec<(u32, u32)> },
}

/// A geometry instance ready for embedding.
#[derive(Debug)]
pub struct BuiltGeometry {
    pub descriptor: Descriptor,
    pub field: Arc<Field>,
    pub geometry: Geometry,
    pub payload: Payload,
    /// The uniform number of points per line.
    pub line_size: usize,
}

/// The standard reflexive forms used by the polar builders.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FormKind {
    /// Nondegenerate alternating bilinear form on even dimension.
    Alternating,
    /// Nondegenerate quadratic form on odd dimension.
    Parabolic,
    /// Quadratic form of maximal Witt index on even dimension.
    Hyperbolic,
    /// Hermitian form over a field of even extension degree.
    Hermitian,
}

#[derive(Clone, Debug)]
enum FormData {
    Bilinear(Matrix),
    Sesquilinear(Matrix),
    /// Quadratic form as a list of coefficient-one monomials `x_i x_j`.
    Quadratic(Vec<(usize, usize)>),
}

/// A standard form on `F_q^dim` together with its Witt index.
#[derive(Clone, Debug)]
pub struct FormSpec {
    pub kind: FormKind,
    pub dim: usize,
    pub witt: usize,
    field: Arc<Field>,
    data: FormData,
}

/// Builds the standard form of the given kind on `F_q^dim`.
///
/// The coordinates are grouped in consecutive hyperbolic pairs
/// `(x_0, x_1), (x_2, x_3), ...`; the parabolic form appends a square in
/// the last coordinate and the Hermitian form on odd dimension appends a
/// norm term. Hermitian forms require a field of even extension degree.
pub fn standard_form(
    kind: FormKind,
    dim: usize,
    field: &Arc<Field>,
) -> Result<FormSpec, ZooError> {
    let err = |msg: String| Err(ZooError::Parameter(msg));
    let data = match kind {
        FormKind::Alternating => {
            if dim < 2 || dim % 2 != 0 {
                return err(format!("alternating forms need even dimension, got {dim}"));
            }
            let mut m = Matrix::zero(field.clone(), dim, dim);
            for i in 0..dim / 2 {
                m.set(2 * i, 2 * i + 1, Fe::ONE);
                m.set(2 * i + 1, 2 * i, field.neg(Fe::ONE));
            }
            FormData::Bilinear(m)
        }
        FormKind::Parabolic => {
            if dim < 3 || dim % 2 == 0 {
                return err(format!("parabolic forms need odd dimension >= 3, got {dim}"));
            }
            let mut terms: Vec<(usize, usize)> =
                (0..dim / 2).map(|i| (2 * i, 2 * i + 1)).collect();
            terms.push((dim - 1, dim - 1));
            FormData::Quadratic(terms)
        }
        FormKind::Hyperbolic => {
            if dim < 2 || dim % 2 != 0 {
                return err(format!("hyperbolic forms need even dimension, got {dim}"));
            }
            FormData::Quadratic((0..dim / 2).map(|i| (2 * i, 2 * i + 1)).collect())
        }
        FormKind::Hermitian => {
            if dim < 2 {
                return err(format!("hermitian forms need dimension >= 2, got {dim}"));
            }
            if field.h() % 2 != 0 {
                return Err(ZooError::Field(GfError::NoQuadraticSubfield(field.q())));
            }
            let mut m = Matrix::zero(field.clone(), dim, dim);
            for i in 0..dim / 2 {
                m.set(2 * i, 2 * i + 1, Fe::ONE);
                m.set(2 * i + 1, 2 * i, Fe::ONE);
            }
            if dim % 2 == 1 {
                m.set(dim - 1, dim - 1, Fe::ONE);
            }
            FormData::Sesquilinear(m)
        }
    };
    let witt = dim / 2;
    let spec = FormSpec { kind, dim, witt, field: field.clone(), data };
    // The first basis vector of every hyperbolic pair spans a witness
    // totally isotropic subspace of dimension witt.
    let witness_rows: Vec<Vec<Fe>> = (0..witt)
        .map(|i| {
            let mut v = vec![Fe::ZERO; dim];
            v[2 * i] = Fe::ONE;
            v
        })
        .collect();
    let witness = Subspace::from_rows(&Matrix::from_rows(field.clone(), witness_rows)?);
    if !spec.is_totally_isotropic(&witness) {
        return err(format!("standard {kind:?} form rejects its witness subspace"));
    }
    Ok(spec)
}

impl FormSpec {
    pub fn field(&self) -> &Arc<Field> {
        &self.field
    }

    /// Gram matrix of a bilinear or sesquilinear form.
    pub fn gram(&self) -> Option<&Matrix> {
        match &self.data {
            FormData::Bilinear(m) | FormData::Sesquilinear(m) => Some(m),
            FormData::Quadratic(_) => None,
        }
    }

    fn eval_bilinear(&self, gram: &Matrix, u: &[Fe], v: &[Fe], conjugate: bool) -> Fe {
        let f = &self.field;
        let mut acc = Fe::ZERO;
        for (a, &ua) in u.iter().enumerate() {
            if ua.is_zero() {
                continue;
            }
            for (b, &vb) in v.iter().enumerate() {
                let g = gram.get(a, b);
                if g.is_zero() || vb.is_zero() {
                    continue;
                }
                let vb = if conjugate { f.conj(vb).expect("even degree") } else { vb };
                acc = f.add(acc, f.mul(ua, f.mul(g, vb)));
            }
        }
        acc
    }

    /// Value of the quadratic form on one vector.
    fn eval_quadratic(&self, terms: &[(usize, usize)], v: &[Fe]) -> Fe {
        let f = &self.field;
        let mut acc = Fe::ZERO;
        for &(i, j) in terms {
            acc = f.add(acc, f.mul(v[i], v[j]));
        }
        acc
    }

    /// True when the form vanishes identically on the subspace.
    ///
    /// Bilinear and sesquilinear forms are checked on basis pairs. A
    /// quadratic form is evaluated on every vector of the subspace, which
    /// is the correct notion in every characteristic.
    pub fn is_totally_isotropic(&self, s: &Subspace) -> bool {
        let basis = s.basis();
        match &self.data {
            FormData::Bilinear(m) => {
                // The diagonal vanishes identically for alternating forms.
                for i in 0..s.dim() {
                    for j in (i + 1)..s.dim() {
                        if !self.eval_bilinear(m, basis.row(i), basis.row(j), false).is_zero() {
                            return false;
                        }
                    }
                }
                true
            }
            FormData::Sesquilinear(m) => {
                for i in 0..s.dim() {
                    for j in i..s.dim() {
                        if !self.eval_bilinear(m, basis.row(i), basis.row(j), true).is_zero() {
                            return false;
                        }
                    }
                }
                true
            }
            FormData::Quadratic(terms) => {
                s.vectors().all(|v| self.eval_quadratic(terms, &v).is_zero())
            }
        }
    }

    /// Checks the Witt index exhaustively: some totally isotropic subspace
    /// of dimension `witt` exists and none of dimension `witt + 1` does.
    /// Intended for tests; the second half enumerates subspaces.
    pub fn verify_witt_index(&self, cap: u64) -> Result<bool, ZooError> {
        let some = enumerate_subspaces(&self.field, self.dim, self.witt, cap)?
            .iter()
            .any(|s| self.is_totally_isotropic(s));
        if !some {
            return Ok(false);
        }
        if self.witt + 1 <= self.dim {
            let none_above = enumerate_subspaces(&self.field, self.dim, self.witt + 1, cap)?
                .iter()
                .all(|s| !self.is_totally_isotropic(s));
            return Ok(none_above);
        }
        Ok(true)
    }
}

fn index_map(points: &[Subspace]) -> HashMap<Subspace, u32> {
    points.iter().enumerate().map(|(i, s)| (s.clone(), i as u32)).collect()
}

/// Extends a subspace by one vector outside it.
fn extend(base: &Subspace, v: &[Fe]) -> Subspace {
    let mut rows = base.basis().row_vecs();
    rows.push(v.to_vec());
    let m = Matrix::from_rows(base.field().clone(), rows).expect("rows agree");
    Subspace::from_rows(&m)
}

/// The pencil of `k`-spaces between `w` and `t`, as sorted point indices.
fn pencil_line(
    w: &Subspace,
    t: &Subspace,
    index: &HashMap<Subspace, u32>,
) -> Result<Vec<u32>, ZooError> {
    let mut pts = std::collections::BTreeSet::new();
    for v in t.vectors() {
        if v.iter().all(|e| e.is_zero()) || w.contains_vector(&v) {
            continue;
        }
        let x = extend(w, &v);
        let &i = index.get(&x).ok_or_else(|| {
            ZooError::Parameter("pencil member is not a point of the geometry".to_string())
        })?;
        pts.insert(i);
    }
    Ok(pts.into_iter().collect())
}

fn uniform_line_size(geometry: &Geometry, what: &str) -> Result<usize, ZooError> {
    let sizes = geometry.line_sizes();
    match sizes.as_slice() {
        [one] => Ok(*one),
        _ => Err(ZooError::Parameter(format!(
            "{what} produced mixed line sizes {sizes:?}"
        ))),
    }
}

/// The Grassmann geometry of `k`-subspaces of `F_q^n`, with pencils of
/// `k`-spaces as lines.
pub fn grassmann(
    field: &Arc<Field>,
    n: usize,
    k: usize,
    caps: &Caps,
) -> Result<BuiltGeometry, ZooError> {
    if n < 2 || k == 0 || k >= n {
        return Err(ZooError::Parameter(format!(
            "grassmann needs 1 <= k < n with n >= 2, got n={n} k={k}"
        )));
    }
    let points = enumerate_subspaces(field, n, k, caps.max_subspaces)?;
    let index = index_map(&points);
    let mut lines = Vec::new();
    for t in enumerate_subspaces(field, n, k + 1, caps.max_subspaces)? {
        for w in t.subspaces(k - 1)? {
            lines.push(pencil_line(&w, &t, &index)?);
        }
    }
    let geometry = Geometry::new(points.len(), lines)?;
    let line_size = uniform_line_size(&geometry, "grassmann")?;
    let mut descriptor = Descriptor::bare(Family::Grassmann, field);
    descriptor.n = Some(n as u32);
    descriptor.k = Some(k as u32);
    Ok(BuiltGeometry {
        descriptor,
        field: field.clone(),
        geometry,
        payload: Payload::Subspaces(points),
        line_size,
    })
}

/// Shared polar construction: totally isotropic `k`-subspaces as points,
/// pencil lines below the Witt index, dual polar lines at the Witt index.
fn polar_geometry(
    form: &FormSpec,
    k: usize,
    caps: &Caps,
) -> Result<(Vec<Subspace>, Vec<Vec<u32>>), ZooError> {
    if k == 0 || k > form.witt {
        return Err(ZooError::Parameter(format!(
            "polar rank {k} is outside 1..={}",
            form.witt
        )));
    }
    let field = form.field();
    let points: Vec<Subspace> = enumerate_subspaces(field, form.dim, k, caps.max_subspaces)?
        .into_iter()
        .filter(|s| form.is_totally_isotropic(s))
        .collect();
    let index = index_map(&points);
    let mut lines = Vec::new();
    if k < form.witt {
        for t in enumerate_subspaces(field, form.dim, k + 1, caps.max_subspaces)? {
            if !form.is_totally_isotropic(&t) {
                continue;
            }
            for w in t.subspaces(k - 1)? {
                lines.push(pencil_line(&w, &t, &index)?);
            }
        }
    } else {
        // Dual polar lines: the generators through a fixed totally
        // isotropic (k-1)-space. Groups of size one are not lines.
        let mut groups: BTreeMap<Subspace, Vec<u32>> = BTreeMap::new();
        for (i, x) in points.iter().enumerate() {
            for w in x.subspaces(k - 1)? {
                groups.entry(w).or_default().push(i as u32);
            }
        }
        lines.extend(groups.into_values().filter(|g| g.len() >= 2));
    }
    Ok((points, lines))
}

fn polar_family(
    family: Family,
    form: FormSpec,
    k: usize,
    caps: &Caps,
    fill: impl FnOnce(&mut Descriptor),
) -> Result<BuiltGeometry, ZooError> {
    let field = form.field().clone();
    let (points, lines) = polar_geometry(&form, k, caps)?;
    let geometry = Geometry::new(points.len(), lines)?;
    let line_size = uniform_line_size(&geometry, family.name())?;
    let mut descriptor = Descriptor::bare(family, &field);
    descriptor.k = Some(k as u32);
    fill(&mut descriptor);
    Ok(BuiltGeometry {
        descriptor,
        field,
        geometry,
        payload: Payload::Subspaces(points),
        line_size,
    })
}

/// Polar Grassmannian of the alternating form on `F_q^(2n)`.
pub fn symplectic(
    field: &Arc<Field>,
    n: usize,
    k: usize,
    caps: &Caps,
) -> Result<BuiltGeometry, ZooError> {
    let form = standard_form(FormKind::Alternating, 2 * n, field)?;
    polar_family(Family::Symplectic, form, k, caps, |d| d.n = Some(n as u32))
}

/// Polar Grassmannian of the parabolic quadric in `F_q^(2n+1)`.
pub fn orthogonal(
    field: &Arc<Field>,
    n: usize,
    k: usize,
    caps: &Caps,
) -> Result<BuiltGeometry, ZooError> {
    let form = standard_form(FormKind::Parabolic, 2 * n + 1, field)?;
    polar_family(Family::Orthogonal, form, k, caps, |d| d.n = Some(n as u32))
}

/// Polar Grassmannian of the hyperbolic quadric in `F_q^(2n)`.
pub fn orthogonal_plus(
    field: &Arc<Field>,
    n: usize,
    k: usize,
    caps: &Caps,
) -> Result<BuiltGeometry, ZooError> {
    let form = standard_form(FormKind::Hyperbolic, 2 * n, field)?;
    polar_family(Family::OrthogonalPlus, form, k, caps, |d| d.n = Some(n as u32))
}

/// Polar Grassmannian of the standard Hermitian form on `F_q^m`. The
/// alphabet `F_q` must have even extension degree; the geometry family is
/// split by the parity of `m`.
pub fn hermitian(
    field: &Arc<Field>,
    m: usize,
    k: usize,
    caps: &Caps,
) -> Result<BuiltGeometry, ZooError> {
    let form = standard_form(FormKind::Hermitian, m, field)?;
    let family = if m % 2 == 1 { Family::HermitianOdd } else { Family::HermitianEven };
    polar_family(family, form, k, caps, |d| {
        d.m = Some(m as u32);
        d.n = Some((m / 2) as u32);
    })
}

/// Normalized representatives of the projective points of `F_q^dim`, in
/// subspace enumeration order.
fn projective_points(
    field: &Arc<Field>,
    dim: usize,
    caps: &Caps,
) -> Result<Vec<Vec<Fe>>, ZooError> {
    Ok(enumerate_subspaces(field, dim, 1, caps.max_subspaces)?
        .into_iter()
        .map(|s| s.basis().row(0).to_vec())
        .collect())
}

fn dot(field: &Field, a: &[Fe], b: &[Fe]) -> Fe {
    let mut acc = Fe::ZERO;
    for (&x, &y) in a.iter().zip(b) {
        acc = field.add(acc, field.mul(x, y));
    }
    acc
}

/// The grid geometry on `PG(m, q) x PG(m2, q)`: points are pairs, lines fix
/// one factor and run over a projective line in the other. `sigma` is the
/// Frobenius exponent the embedding applies to the right factor; it does
/// not change the incidence structure.
pub fn segre(
    field: &Arc<Field>,
    m: usize,
    m2: usize,
    sigma: u32,
    caps: &Caps,
) -> Result<BuiltGeometry, ZooError> {
    if m == 0 || m2 == 0 {
        return Err(ZooError::Parameter(
            "segre needs both factors of positive dimension".to_string(),
        ));
    }
    if sigma >= field.h() {
        return Err(ZooError::Parameter(format!(
            "sigma={sigma} is not a Frobenius exponent for h={}",
            field.h()
        )));
    }
    let left = projective_points(field, m + 1, caps)?;
    let right = projective_points(field, m2 + 1, caps)?;
    let n2 = right.len() as u32;
    let pairs: Vec<(u32, u32)> = (0..left.len() as u32)
        .flat_map(|i| (0..n2).map(move |j| (i, j)))
        .collect();

    let mut lines = Vec::new();
    for i in 0..left.len() as u32 {
        for l2 in enumerate_subspaces(field, m2 + 1, 2, caps.max_subspaces)? {
            let pts: Vec<u32> = right
                .iter()
                .enumerate()
                .filter(|(_, b)| l2.contains_vector(b))
                .map(|(j, _)| i * n2 + j as u32)
                .collect();
            lines.push(pts);
        }
    }
    for j in 0..n2 {
        for l1 in enumerate_subspaces(field, m + 1, 2, caps.max_subspaces)? {
            let pts: Vec<u32> = left
                .iter()
                .enumerate()
                .filter(|(_, a)| l1.contains_vector(a))
                .map(|(i, _)| i as u32 * n2 + j)
                .collect();
            lines.push(pts);
        }
    }

    let geometry = Geometry::new(pairs.len(), lines)?;
    let line_size = uniform_line_size(&geometry, "segre")?;
    let mut descriptor = Descriptor::bare(Family::Segre, field);
    descriptor.m = Some(m as u32);
    descriptor.m2 = Some(m2 as u32);
    descriptor.sigma = Some(sigma);
    Ok(BuiltGeometry {
        descriptor,
        field: field.clone(),
        geometry,
        payload: Payload::Tensor { left, right, pairs },
        line_size,
    })
}

/// The flag geometry of `PG(n, q)`: points are incident point-hyperplane
/// pairs `(p, ker xi)`. One line type fixes a hyperplane and runs `p` over
/// a line inside it; the other fixes `p` together with a codimension-two
/// space `S` through it and runs the hyperplane over those containing `S`.
/// `sigma` twists the hyperplane factor of the embedding only.
pub fn point_hyperplane(
    field: &Arc<Field>,
    n: usize,
    sigma: u32,
    caps: &Caps,
) -> Result<BuiltGeometry, ZooError> {
    if n < 2 {
        return Err(ZooError::Parameter(format!(
            "point_hyperplane needs n >= 2, got {n}"
        )));
    }
    if sigma >= field.h() {
        return Err(ZooError::Parameter(format!(
            "sigma={sigma} is not a Frobenius exponent for h={}",
            field.h()
        )));
    }
    let points = projective_points(field, n + 1, caps)?;
    let functionals = points.clone();
    let mut pairs = Vec::new();
    let mut flag_index: HashMap<(u32, u32), u32> = HashMap::new();
    for (ip, p) in points.iter().enumerate() {
        for (ix, xi) in functionals.iter().enumerate() {
            if dot(field, xi, p).is_zero() {
                flag_index.insert((ip as u32, ix as u32), pairs.len() as u32);
                pairs.push((ip as u32, ix as u32));
            }
        }
    }

    let annihilates = |xi: &[Fe], s: &Subspace| {
        (0..s.dim()).all(|r| dot(field, xi, s.basis().row(r)).is_zero())
    };

    let mut lines = Vec::new();
    // Lines of the first kind: a projective line inside a fixed hyperplane.
    for l in enumerate_subspaces(field, n + 1, 2, caps.max_subspaces)? {
        for (ix, xi) in functionals.iter().enumerate() {
            if !annihilates(xi, &l) {
                continue;
            }
            let pts: Vec<u32> = points
                .iter()
                .enumerate()
                .filter(|(_, p)| l.contains_vector(p))
                .map(|(ip, _)| flag_index[&(ip as u32, ix as u32)])
                .collect();
            lines.push(pts);
        }
    }
    // Lines of the second kind: the hyperplanes through a fixed
    // codimension-two space, paired with a fixed point inside it.
    for s in enumerate_subspaces(field, n + 1, n - 1, caps.max_subspaces)? {
        for (ip, p) in points.iter().enumerate() {
            if !s.contains_vector(p) {
                continue;
            }
            let pts: Vec<u32> = functionals
                .iter()
                .enumerate()
                .filter(|(_, xi)| annihilates(xi, &s))
                .map(|(ix, _)| flag_index[&(ip as u32, ix as u32)])
                .collect();
            lines.push(pts);
        }
    }

    let geometry = Geometry::new(pairs.len(), lines)?;
    let line_size = uniform_line_size(&geometry, "point_hyperplane")?;
    let mut descriptor = Descriptor::bare(Family::PointHyperplane, field);
    descriptor.n = Some(n as u32);
    descriptor.sigma = Some(sigma);
    Ok(BuiltGeometry {
        descriptor,
        field: field.clone(),
        geometry,
        payload: Payload::Tensor { left: points, right: functionals, pairs },
        line_size,
    })
}

/// Minimum-weight test for functionals on the line symplectic code.
///
/// A functional on the Grassmann coordinates of `F_q^(2n)` corresponds to
/// an alternating matrix `S` built from its pair coordinates. The word it
/// induces has minimum weight exactly when `M^(-1) S`, with `M` the Gram
/// matrix of the symplectic form, has exactly two eigenspaces over `F_q`,
/// of dimensions `2n - 2` and `2`. Functionals whose matrix has no
/// eigenvalues at all fail the test.
pub fn symplectic_minweight_predicate(
    form: &FormSpec,
    xi: &[Fe],
) -> Result<bool, ZooError> {
    if form.kind != FormKind::Alternating {
        return Err(ZooError::Parameter(
            "the minimum weight predicate needs an alternating form".to_string(),
        ));
    }
    let t = form.dim;
    let expected_pairs = t * (t - 1) / 2;
    if xi.len() != expected_pairs {
        return Err(ZooError::Parameter(format!(
            "functional has length {}, expected {expected_pairs}",
            xi.len()
        )));
    }
    let field = form.field();
    let mut s = Matrix::zero(field.clone(), t, t);
    let mut idx = 0usize;
    for i in 0..t {
        for j in (i + 1)..t {
            s.set(i, j, xi[idx]);
            s.set(j, i, field.neg(xi[idx]));
            idx += 1;
        }
    }
    let m = form.gram().expect("alternating forms are bilinear");
    let m_inv = m.inverse()?.expect("the standard symplectic form is nondegenerate");
    let a = m_inv.matmul(&s)?;

    let mut dims = Vec::new();
    for lambda in field.elements() {
        let mut shifted = a.clone();
        for i in 0..t {
            shifted.set(i, i, field.sub(a.get(i, i), lambda));
        }
        let dim = t - shifted.rank();
        if dim > 0 {
            dims.push(dim);
        }
    }
    dims.sort_unstable();
    // Two eigenspaces of dimensions 2 and 2n - 2; at n = 2 this means two
    // distinct eigenvalues whose eigenspaces are both planes.
    let mut expected = vec![2, t - 2];
    expected.sort_unstable();
    Ok(dims == expected)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn caps() -> Caps {
        Caps::default()
    }

    fn f(p: u32, h: u32) -> Arc<Field> {
        Field::new(p, h).unwrap()
    }

    #[test]
    fn grassmann_4_2_f2_shape() {
        let g = grassmann(&f(2, 1), 4, 2, &caps()).unwrap();
        assert_eq!(g.geometry.num_points(), 35);
        assert_eq!(g.geometry.lines().len(), 105);
        assert_eq!(g.line_size, 3);
        // The collinearity graph is regular: 18 collinear partners apiece.
        for p in 0..35 {
            assert_eq!(g.geometry.degree(p), 18);
        }
        assert_eq!(g.descriptor.label(), "grassmann(n=4, k=2) over F_2");
    }

    #[test]
    fn grassmann_4_2_f3_shape() {
        let g = grassmann(&f(3, 1), 4, 2, &caps()).unwrap();
        assert_eq!(g.geometry.num_points(), 130);
        assert_eq!(g.geometry.lines().len(), 520);
        assert_eq!(g.line_size, 4);
    }

    #[test]
    fn symplectic_dual_polar_f3() {
        let g = symplectic(&f(3, 1), 2, 2, &caps()).unwrap();
        assert_eq!(g.geometry.num_points(), 40);
        assert_eq!(g.geometry.lines().len(), 40);
        assert_eq!(g.line_size, 4);
    }

    #[test]
    fn symplectic_line_polar_f2() {
        let g = symplectic(&f(2, 1), 3, 2, &caps()).unwrap();
        assert_eq!(g.geometry.num_points(), 315);
        assert_eq!(g.line_size, 3);
    }

    #[test]
    fn orthogonal_2_2_both_fields() {
        let g = orthogonal(&f(2, 1), 2, 2, &caps()).unwrap();
        assert_eq!(g.geometry.num_points(), 15);
        assert_eq!(g.geometry.lines().len(), 15);
        assert_eq!(g.line_size, 3);
        let g = orthogonal(&f(3, 1), 2, 2, &caps()).unwrap();
        assert_eq!(g.geometry.num_points(), 40);
        assert_eq!(g.line_size, 4);
    }

    #[test]
    fn orthogonal_plus_has_thin_lines() {
        let g = orthogonal_plus(&f(2, 1), 3, 3, &caps()).unwrap();
        assert_eq!(g.geometry.num_points(), 30);
        assert_eq!(g.geometry.lines().len(), 105);
        // Every plane of a hyperbolic quadric in PG(5, q) lies on exactly
        // two generators, so dual polar lines here have two points.
        assert_eq!(g.line_size, 2);
    }

    #[test]
    fn orthogonal_plus_4_4_point_count() {
        let g = orthogonal_plus(&f(2, 1), 4, 4, &caps()).unwrap();
        assert_eq!(g.geometry.num_points(), 270);
        assert_eq!(g.line_size, 2);
    }

    #[test]
    fn hermitian_even_is_a_generalized_quadrangle() {
        let g = hermitian(&f(2, 2), 4, 2, &caps()).unwrap();
        assert_eq!(g.descriptor.family, Family::HermitianEven);
        assert_eq!(g.geometry.num_points(), 27);
        assert_eq!(g.geometry.lines().len(), 45);
        assert_eq!(g.line_size, 3);
    }

    #[test]
    fn hermitian_odd_shape() {
        let g = hermitian(&f(2, 2), 5, 2, &caps()).unwrap();
        assert_eq!(g.descriptor.family, Family::HermitianOdd);
        assert_eq!(g.geometry.num_points(), 297);
        assert_eq!(g.geometry.lines().len(), 165);
        assert_eq!(g.line_size, 9);
    }

    #[test]
    fn hermitian_needs_even_degree() {
        assert!(hermitian(&f(3, 1), 4, 2, &caps()).is_err());
    }

    #[test]
    fn segre_1_1_grid() {
        let g = segre(&f(2, 1), 1, 1, 0, &caps()).unwrap();
        assert_eq!(g.geometry.num_points(), 9);
        assert_eq!(g.geometry.lines().len(), 6);
        assert_eq!(g.line_size, 3);
    }

    #[test]
    fn segre_1_2_shape() {
        let g = segre(&f(2, 1), 1, 2, 0, &caps()).unwrap();
        assert_eq!(g.geometry.num_points(), 21);
        assert_eq!(g.geometry.lines().len(), 28);
        assert_eq!(g.line_size, 3);
    }

    #[test]
    fn point_hyperplane_flags() {
        let g = point_hyperplane(&f(2, 1), 2, 0, &caps()).unwrap();
        assert_eq!(g.geometry.num_points(), 21);
        assert_eq!(g.geometry.lines().len(), 14);
        assert_eq!(g.line_size, 3);
        for p in 0..21 {
            assert_eq!(g.geometry.degree(p), 4);
        }
    }

    #[test]
    fn witt_indices_of_standard_forms() {
        assert!(standard_form(FormKind::Alternating, 4, &f(3, 1))
            .unwrap()
            .verify_witt_index(1 << 22)
            .unwrap());
        assert!(standard_form(FormKind::Parabolic, 5, &f(2, 1))
            .unwrap()
            .verify_witt_index(1 << 22)
            .unwrap());
        assert!(standard_form(FormKind::Hyperbolic, 6, &f(2, 1))
            .unwrap()
            .verify_witt_index(1 << 22)
            .unwrap());
        assert!(standard_form(FormKind::Hermitian, 4, &f(2, 2))
            .unwrap()
            .verify_witt_index(1 << 22)
            .unwrap());
        assert!(standard_form(FormKind::Hermitian, 5, &f(2, 2))
            .unwrap()
            .verify_witt_index(1 << 22)
            .unwrap());
    }

    #[test]
    fn parabolic_last_coordinate_is_nonsingular() {
        let form = standard_form(FormKind::Parabolic, 5, &f(3, 1)).unwrap();
        let mut v = vec![Fe::ZERO; 5];
        v[4] = Fe::ONE;
        match &form.data {
            FormData::Quadratic(terms) => {
                assert_eq!(form.eval_quadratic(terms, &v), Fe::ONE);
            }
            _ => unreachable!(),
        }
    }

    #[test]
    fn parameter_validation() {
        assert!(grassmann(&f(2, 1), 4, 0, &caps()).is_err());
        assert!(grassmann(&f(2, 1), 4, 4, &caps()).is_err());
        assert!(symplectic(&f(2, 1), 2, 3, &caps()).is_err());
        assert!(segre(&f(2, 1), 1, 1, 1, &caps()).is_err());
        assert!(point_hyperplane(&f(2, 1), 1, 0, &caps()).is_err());
    }

    #[test]
    fn subspace_cap_applies_to_constructions() {
        let tight = Caps { max_subspaces: 10, ..Caps::default() };
        assert!(matches!(
            grassmann(&f(2, 1), 4, 2, &tight),
            Err(ZooError::Linalg(LinalgError::EnumerationTooLarge { .. }))
        ));
    }
}
