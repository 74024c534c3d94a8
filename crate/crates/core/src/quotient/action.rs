//! Groups of linear isometries and the quotient geometry they induce.
//!
//! Complex spaces `C^k` are stored as `R^{2k}` with interleaved layout
//! `[re0, im0, re1, im1, ...]`; the real inner product is `Re⟨·,·⟩`.
//! Point clouds for [`PermutationMode::Columns`] are `n` consecutive blocks of
//! length `d`.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::assignment;
use crate::error::{check_dim, Error, Result};
use crate::linalg::{cdot, cscale, dist, dist_sq, dot, mat_vec};
use crate::poly::CharacterTable;
use crate::sequence::{self, SparseSeq};

/// Orbit points closer than this are merged.
pub const ORBIT_DEDUP_TOL: f64 = 1e-10;
/// Tolerance for orthogonality and group membership of explicit matrices.
pub const MEMBERSHIP_TOL: f64 = 1e-10;
/// Largest `n` for which `S_n` is enumerated element by element.
pub const MAX_ENUMERATED_PERMUTATION: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PermutationMode {
    /// `S_n` permuting the coordinates of `R^n`.
    Coordinates,
    /// `S_n` permuting the `n` columns of a `d × n` matrix (point clouds).
    Columns { d: usize },
}

#[derive(Debug, Clone, PartialEq)]
pub enum ActionKind {
    /// Explicit list of real orthogonal matrices.
    FiniteMatrix,
    /// `{±id}` on `R^d`.
    Sign,
    /// All unit scalars acting on `C^k`.
    Phase,
    /// `r`-th roots of unity acting by scalar multiplication on `C^k`.
    CyclicRotation { r: usize },
    Permutation { n: usize, mode: PermutationMode },
    /// Cyclic translation of `n` entries (real or complex).
    CircularShift { n: usize, complex: bool },
    /// Finite abelian group acting on `C^d` by diagonal characters.
    DiagonalUnitary(CharacterTable),
    /// Translation of finitely supported scalar sequences on `Z`.
    IntegerShift,
    /// All permutations of the index set of finitely supported `R^d`-valued sequences.
    Multiset { d: usize },
    /// `G_1 × G_2` acting on `V_1 ⊕ V_2` (vectors are concatenated).
    Product(Box<GroupAction>, Box<GroupAction>),
}

impl ActionKind {
    pub fn name(&self) -> &'static str {
        match self {
            ActionKind::FiniteMatrix => "finite_matrix",
            ActionKind::Sign => "sign",
            ActionKind::Phase => "phase",
            ActionKind::CyclicRotation { .. } => "cyclic_rotation",
            ActionKind::Permutation { .. } => "permutation",
            ActionKind::CircularShift { .. } => "circular_shift",
            ActionKind::DiagonalUnitary(_) => "diagonal_unitary",
            ActionKind::IntegerShift => "integer_shift",
            ActionKind::Multiset { .. } => "multiset",
            ActionKind::Product(..) => "product",
        }
    }
}

/// A group acting by linear isometries on a real Hilbert space.
#[derive(Debug, Clone, PartialEq)]
pub struct GroupAction {
    kind: ActionKind,
    /// `None` for the sequence spaces (integer shift, multiset).
    ambient_dim: Option<usize>,
    elements: Option<Vec<DMatrix<f64>>>,
    permutations: Option<Vec<Vec<usize>>>,
}

fn all_permutations(n: usize) -> Vec<Vec<usize>> {
    fn rec(prefix: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                prefix.push(i);
                rec(prefix, used, out);
                prefix.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::with_capacity(n), &mut vec![false; n], &mut out);
    out
}

fn max_abs_diff(a: &DMatrix<f64>, b: &DMatrix<f64>) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

impl GroupAction {
    fn closed_form(kind: ActionKind, ambient_dim: Option<usize>) -> Self {
        let permutations = match &kind {
            ActionKind::Permutation { n, .. } if *n <= MAX_ENUMERATED_PERMUTATION => {
                Some(all_permutations(*n))
            }
            _ => None,
        };
        GroupAction { kind, ambient_dim, elements: None, permutations }
    }

    /// Validated explicit group of orthogonal matrices: each element orthogonal,
    /// identity present, closed under products and inverses.
    pub fn finite_matrix(elements: Vec<DMatrix<f64>>) -> Result<Self> {
        let first = elements
            .first()
            .ok_or_else(|| Error::InvalidGroup("empty element list".into()))?;
        let dim = first.nrows();
        for (k, m) in elements.iter().enumerate() {
            if m.nrows() != dim || m.ncols() != dim {
                return Err(Error::InvalidGroup(format!("element {k} is not {dim}×{dim}")));
            }
            let err = max_abs_diff(&(m.transpose() * m), &DMatrix::identity(dim, dim));
            if err > MEMBERSHIP_TOL {
                return Err(Error::InvalidGroup(format!(
                    "element {k} is not orthogonal (‖MᵀM − I‖_max = {err:.3e})"
                )));
            }
        }
        let contains = |m: &DMatrix<f64>| elements.iter().any(|e| max_abs_diff(e, m) <= MEMBERSHIP_TOL);
        if !contains(&DMatrix::identity(dim, dim)) {
            return Err(Error::InvalidGroup("identity is missing".into()));
        }
        for (a, ma) in elements.iter().enumerate() {
            if !contains(&ma.transpose()) {
                return Err(Error::InvalidGroup(format!("inverse of element {a} is missing")));
            }
            for (b, mb) in elements.iter().enumerate() {
                if !contains(&(ma * mb)) {
                    return Err(Error::InvalidGroup(format!("product of elements {a} and {b} is missing")));
                }
            }
        }
        Ok(GroupAction {
            kind: ActionKind::FiniteMatrix,
            ambient_dim: Some(dim),
            elements: Some(elements),
            permutations: None,
        })
    }

    pub fn trivial(dim: usize) -> Self {
        GroupAction {
            kind: ActionKind::FiniteMatrix,
            ambient_dim: Some(dim),
            elements: Some(vec![DMatrix::identity(dim, dim)]),
            permutations: None,
        }
    }

    pub fn sign(dim: usize) -> Self {
        Self::closed_form(ActionKind::Sign, Some(dim))
    }

    /// Unit complex scalars acting on `C^k` (real dimension `2k`).
    pub fn phase(complex_dim: usize) -> Self {
        Self::closed_form(ActionKind::Phase, Some(2 * complex_dim))
    }

    pub fn cyclic_rotation(r: usize, complex_dim: usize) -> Result<Self> {
        if r == 0 {
            return Err(Error::InvalidParameter("rotation order must be positive".into()));
        }
        Ok(Self::closed_form(ActionKind::CyclicRotation { r }, Some(2 * complex_dim)))
    }

    pub fn permutation_coordinates(n: usize) -> Self {
        Self::closed_form(
            ActionKind::Permutation { n, mode: PermutationMode::Coordinates },
            Some(n),
        )
    }

    pub fn permutation_columns(n: usize, d: usize) -> Self {
        Self::closed_form(
            ActionKind::Permutation { n, mode: PermutationMode::Columns { d } },
            Some(n * d),
        )
    }

    pub fn circular_shift(n: usize) -> Self {
        Self::closed_form(ActionKind::CircularShift { n, complex: false }, Some(n))
    }

    pub fn circular_shift_complex(n: usize) -> Self {
        Self::closed_form(ActionKind::CircularShift { n, complex: true }, Some(2 * n))
    }

    pub fn diagonal_unitary(table: CharacterTable) -> Self {
        let dim = 2 * table.dim();
        Self::closed_form(ActionKind::DiagonalUnitary(table), Some(dim))
    }

    pub fn integer_shift() -> Self {
        Self::closed_form(ActionKind::IntegerShift, None)
    }

    pub fn multiset(d: usize) -> Result<Self> {
        if d == 0 {
            return Err(Error::InvalidParameter("block dimension must be positive".into()));
        }
        Ok(Self::closed_form(ActionKind::Multiset { d }, None))
    }

    /// Direct product of two actions on fixed-dimensional spaces.
    pub fn product(a: GroupAction, b: GroupAction) -> Result<Self> {
        let (Some(da), Some(db)) = (a.ambient_dim, b.ambient_dim) else {
            return Err(Error::UnsupportedAction("product factors must act on fixed dimensions".into()));
        };
        Ok(Self::closed_form(ActionKind::Product(Box::new(a), Box::new(b)), Some(da + db)))
    }

    pub fn kind(&self) -> &ActionKind {
        &self.kind
    }

    pub fn ambient_dim(&self) -> Option<usize> {
        self.ambient_dim
    }

    pub fn is_complex(&self) -> bool {
        matches!(
            self.kind,
            ActionKind::Phase
                | ActionKind::CyclicRotation { .. }
                | ActionKind::DiagonalUnitary(_)
                | ActionKind::CircularShift { complex: true, .. }
        )
    }

    /// Number of elements when the group is finite and enumerable.
    pub fn order(&self) -> Option<usize> {
        match &self.kind {
            ActionKind::FiniteMatrix => self.elements.as_ref().map(Vec::len),
            ActionKind::Sign => Some(2),
            ActionKind::CyclicRotation { r } => Some(*r),
            ActionKind::Permutation { .. } => self.permutations.as_ref().map(Vec::len),
            ActionKind::CircularShift { n, .. } => Some(*n),
            ActionKind::DiagonalUnitary(t) => Some(t.group_order()),
            ActionKind::Product(a, b) => Some(a.order()? * b.order()?),
            ActionKind::Phase | ActionKind::IntegerShift | ActionKind::Multiset { .. } => None,
        }
    }

    pub fn is_finite(&self) -> bool {
        self.order().is_some()
    }

    /// Checks that `x` lies in the ambient space.
    pub fn check_vector(&self, x: &[f64]) -> Result<()> {
        match (&self.kind, self.ambient_dim) {
            (_, Some(dim)) => check_dim(dim, x.len()),
            (ActionKind::Multiset { d }, None) if !x.len().is_multiple_of(*d) => {
                Err(Error::DimensionMismatch { expected: *d, got: x.len() })
            }
            _ => Ok(()),
        }
    }

    fn unsupported(&self, what: &str) -> Error {
        Error::UnsupportedAction(format!("{what} is not available for {} actions", self.kind.name()))
    }

    /// Applies the `k`-th group element (see [`Self::order`]) to `x`.
    pub fn apply(&self, k: usize, x: &[f64]) -> Result<Vec<f64>> {
        self.check_vector(x)?;
        let order = self.order().ok_or_else(|| self.unsupported("element enumeration"))?;
        if k >= order {
            return Err(Error::InvalidParameter(format!("element index {k} out of range {order}")));
        }
        Ok(match &self.kind {
            ActionKind::FiniteMatrix => mat_vec(&self.elements.as_ref().unwrap()[k], x),
            ActionKind::Sign => {
                if k == 0 {
                    x.to_vec()
                } else {
                    x.iter().map(|v| -v).collect()
                }
            }
            ActionKind::CyclicRotation { r } => {
                cscale(x, Complex64::from_polar(1.0, 2.0 * PI * k as f64 / *r as f64))
            }
            ActionKind::Permutation { n, mode } => {
                let sigma = &self.permutations.as_ref().unwrap()[k];
                let block = match mode {
                    PermutationMode::Coordinates => 1,
                    PermutationMode::Columns { d } => *d,
                };
                let mut out = vec![0.0; n * block];
                for (i, &s) in sigma.iter().enumerate() {
                    out[s * block..(s + 1) * block].copy_from_slice(&x[i * block..(i + 1) * block]);
                }
                out
            }
            ActionKind::CircularShift { n, complex } => {
                let block = if *complex { 2 } else { 1 };
                let mut out = vec![0.0; n * block];
                for j in 0..*n {
                    let to = (j + k) % n;
                    out[to * block..(to + 1) * block].copy_from_slice(&x[j * block..(j + 1) * block]);
                }
                out
            }
            ActionKind::DiagonalUnitary(t) => {
                let g = &t.elements()[k];
                x.chunks_exact(2)
                    .enumerate()
                    .flat_map(|(i, c)| {
                        let z = Complex64::new(c[0], c[1]) * t.value(i, g);
                        [z.re, z.im]
                    })
                    .collect()
            }
            ActionKind::Product(a, b) => {
                let split = a.ambient_dim.unwrap();
                let ob = b.order().unwrap();
                let mut out = a.apply(k / ob, &x[..split])?;
                out.extend(b.apply(k % ob, &x[split..])?);
                out
            }
            ActionKind::Phase | ActionKind::IntegerShift | ActionKind::Multiset { .. } => unreachable!(),
        })
    }

    /// Explicit orthogonal matrices of every element, for finite kinds.
    pub fn matrices(&self) -> Result<Vec<DMatrix<f64>>> {
        if let Some(e) = &self.elements {
            return Ok(e.clone());
        }
        let order = self.order().ok_or_else(|| self.unsupported("explicit matrices"))?;
        let dim = self.ambient_dim.unwrap();
        (0..order)
            .map(|k| {
                let mut m = DMatrix::zeros(dim, dim);
                for c in 0..dim {
                    let mut e = vec![0.0; dim];
                    e[c] = 1.0;
                    let col = self.apply(k, &e)?;
                    for (r, v) in col.into_iter().enumerate() {
                        m[(r, c)] = v;
                    }
                }
                Ok(m)
            })
            .collect()
    }

    /// The same group as an explicit, validated list of matrices.
    pub fn to_finite_matrix(&self) -> Result<GroupAction> {
        GroupAction::finite_matrix(self.matrices()?)
    }

    /// `{g·x : g ∈ G}` with near-duplicates merged.
    pub fn orbit(&self, x: &[f64]) -> Result<Vec<Vec<f64>>> {
        self.check_vector(x)?;
        let order = self.order().ok_or_else(|| self.unsupported("orbit enumeration"))?;
        let mut out: Vec<Vec<f64>> = Vec::new();
        for k in 0..order {
            let gx = self.apply(k, x)?;
            if !out.iter().any(|p| dist(p, &gx) <= ORBIT_DEDUP_TOL) {
                out.push(gx);
            }
        }
        Ok(out)
    }

    fn check_pair(&self, x: &[f64], y: &[f64]) -> Result<()> {
        self.check_vector(x)?;
        self.check_vector(y)?;
        if self.ambient_dim.is_none() {
            return Ok(());
        }
        check_dim(x.len(), y.len())
    }

    /// Quotient distance by brute-force enumeration of `min_g ‖x − g·y‖`.
    pub fn enumerated_distance(&self, x: &[f64], y: &[f64]) -> Result<f64> {
        self.check_pair(x, y)?;
        let order = self.order().ok_or_else(|| self.unsupported("enumeration"))?;
        let mut best = f64::INFINITY;
        for k in 0..order {
            best = best.min(dist_sq(x, &self.apply(k, y)?));
        }
        Ok(best.sqrt())
    }

    /// Max filter by brute-force enumeration of `max_g ⟨z, g·x⟩`.
    pub fn enumerated_max_filter(&self, z: &[f64], x: &[f64]) -> Result<f64> {
        self.check_pair(z, x)?;
        let order = self.order().ok_or_else(|| self.unsupported("enumeration"))?;
        let mut best = f64::NEG_INFINITY;
        for k in 0..order {
            best = best.max(dot(z, &self.apply(k, x)?));
        }
        Ok(best)
    }

    fn as_sequences(&self, x: &[f64], y: &[f64]) -> Result<(SparseSeq, SparseSeq)> {
        let d = match self.kind {
            ActionKind::Multiset { d } => d,
            _ => 1,
        };
        Ok((SparseSeq::from_blocks(d, x)?, SparseSeq::from_blocks(d, y)?))
    }

    fn column_blocks(x: &[f64], d: usize) -> Vec<&[f64]> {
        x.chunks_exact(d).collect()
    }

    /// `d([x],[y]) = inf_g ‖x − g·y‖`.
    pub fn quotient_distance(&self, x: &[f64], y: &[f64]) -> Result<f64> {
        self.check_pair(x, y)?;
        match &self.kind {
            ActionKind::Sign => {
                let plus: f64 = x.iter().zip(y).map(|(a, b)| (a + b) * (a + b)).sum();
                Ok(dist_sq(x, y).min(plus).sqrt())
            }
            ActionKind::Phase => {
                // Rotate y so that ⟨x, e^{iθ}y⟩ is real and nonnegative.
                let c = cdot(y, x);
                let w = if c.norm() > 0.0 { c / c.norm() } else { Complex64::new(1.0, 0.0) };
                Ok(dist(x, &cscale(y, w)))
            }
            ActionKind::Permutation { mode: PermutationMode::Coordinates, .. } => {
                let mut xs = x.to_vec();
                let mut ys = y.to_vec();
                xs.sort_by(f64::total_cmp);
                ys.sort_by(f64::total_cmp);
                Ok(dist(&xs, &ys))
            }
            ActionKind::Permutation { mode: PermutationMode::Columns { d }, .. } => {
                let xb = Self::column_blocks(x, *d);
                let yb = Self::column_blocks(y, *d);
                let cost: Vec<Vec<f64>> =
                    xb.iter().map(|a| yb.iter().map(|b| dist_sq(a, b)).collect()).collect();
                Ok(assignment::min_cost(&cost).max(0.0).sqrt())
            }
            ActionKind::IntegerShift => {
                let (a, b) = self.as_sequences(x, y)?;
                sequence::shift_quotient_distance(&a, &b)
            }
            ActionKind::Multiset { .. } => {
                let (a, b) = self.as_sequences(x, y)?;
                sequence::multiset_distance(&a, &b)
            }
            ActionKind::Product(a, b) => {
                let s = a.ambient_dim.unwrap();
                let da = a.quotient_distance(&x[..s], &y[..s])?;
                let db = b.quotient_distance(&x[s..], &y[s..])?;
                Ok(da.hypot(db))
            }
            _ => self.enumerated_distance(x, y),
        }
    }

    /// `⟨⟨[z],[x]⟩⟩ = sup_g ⟨z, g·x⟩`.
    pub fn max_filter(&self, z: &[f64], x: &[f64]) -> Result<f64> {
        self.check_pair(z, x)?;
        match &self.kind {
            ActionKind::Sign => Ok(dot(z, x).abs()),
            ActionKind::Phase => Ok(cdot(x, z).norm()),
            ActionKind::Permutation { mode: PermutationMode::Coordinates, .. } => {
                let mut zs = z.to_vec();
                let mut xs = x.to_vec();
                zs.sort_by(f64::total_cmp);
                xs.sort_by(f64::total_cmp);
                Ok(dot(&zs, &xs))
            }
            ActionKind::Permutation { mode: PermutationMode::Columns { d }, .. } => {
                let zb = Self::column_blocks(z, *d);
                let xb = Self::column_blocks(x, *d);
                let cost: Vec<Vec<f64>> =
                    zb.iter().map(|a| xb.iter().map(|b| -dot(a, b)).collect()).collect();
                Ok(-assignment::min_cost(&cost))
            }
            ActionKind::IntegerShift => {
                let (a, b) = self.as_sequences(z, x)?;
                sequence::shift_max_filter(&a, &b)
            }
            ActionKind::Multiset { .. } => {
                let (a, b) = self.as_sequences(z, x)?;
                sequence::multiset_max_filter(&a, &b)
            }
            ActionKind::Product(a, b) => {
                let s = a.ambient_dim.unwrap();
                Ok(a.max_filter(&z[..s], &x[..s])? + b.max_filter(&z[s..], &x[s..])?)
            }
            _ => self.enumerated_max_filter(z, x),
        }
    }

    /// `[x] ↦ (⟨⟨[z_i],[x]⟩⟩)_i`.
    pub fn max_filter_bank(&self, templates: &[Vec<f64>], x: &[f64]) -> Result<Vec<f64>> {
        templates.iter().map(|z| self.max_filter(z, x)).collect()
    }

    /// Indices of the elements fixing `x` within `tol`.
    pub fn stabilizer(&self, x: &[f64], tol: f64) -> Result<Vec<usize>> {
        let order = self.order().ok_or_else(|| self.unsupported("stabilizer computation"))?;
        let mut out = Vec::new();
        for k in 0..order {
            if dist(&self.apply(k, x)?, x) <= tol {
                out.push(k);
            }
        }
        Ok(out)
    }
}

/// Group description file layout.
#[derive(Debug, Clone, Default, Serialize, Deserialize, PartialEq)]
pub struct GroupSpec {
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mode: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub complex: Option<bool>,
    /// Each matrix flattened row-major.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matrices: Option<Vec<Vec<f64>>>,
    /// `characters[i][k] = χ_i(h_k)` as `[re, im]`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub characters: Option<Vec<Vec<[f64; 2]>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub orders: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub factors: Option<Vec<GroupSpec>>,
}

impl GroupSpec {
    fn need(&self, field: Option<usize>, name: &str) -> Result<usize> {
        field.ok_or_else(|| Error::InvalidGroup(format!("kind `{}` requires field `{name}`", self.kind)))
    }
}

impl TryFrom<&GroupSpec> for GroupAction {
    type Error = Error;

    fn try_from(spec: &GroupSpec) -> Result<Self> {
        match spec.kind.as_str() {
            "finite_matrix" => {
                let mats = spec
                    .matrices
                    .as_ref()
                    .ok_or_else(|| Error::InvalidGroup("finite_matrix requires `matrices`".into()))?;
                let mut elements = Vec::with_capacity(mats.len());
                for (k, flat) in mats.iter().enumerate() {
                    let dim = (flat.len() as f64).sqrt().round() as usize;
                    if dim * dim != flat.len() {
                        return Err(Error::InvalidGroup(format!("matrix {k} is not square")));
                    }
                    elements.push(DMatrix::from_row_slice(dim, dim, flat));
                }
                GroupAction::finite_matrix(elements)
            }
            "trivial" => Ok(GroupAction::trivial(spec.need(spec.d, "d")?)),
            "sign" => Ok(GroupAction::sign(spec.need(spec.d, "d")?)),
            "phase" => Ok(GroupAction::phase(spec.need(spec.d, "d")?)),
            "cyclic_rotation" => GroupAction::cyclic_rotation(spec.need(spec.r, "r")?, spec.d.unwrap_or(1)),
            "permutation" => {
                let n = spec.need(spec.n, "n")?;
                match spec.mode.as_deref().unwrap_or("coordinates") {
                    "coordinates" => Ok(GroupAction::permutation_coordinates(n)),
                    "columns" => Ok(GroupAction::permutation_columns(n, spec.need(spec.d, "d")?)),
                    other => Err(Error::InvalidGroup(format!("unknown permutation mode `{other}`"))),
                }
            }
            "circular_shift" => {
                let n = spec.need(spec.n, "n")?;
                Ok(if spec.complex.unwrap_or(false) {
                    GroupAction::circular_shift_complex(n)
                } else {
                    GroupAction::circular_shift(n)
                })
            }
            "diagonal_unitary" => {
                let chars = spec
                    .characters
                    .as_ref()
                    .ok_or_else(|| Error::InvalidGroup("diagonal_unitary requires `characters`".into()))?;
                let values: Vec<Vec<Complex64>> = chars
                    .iter()
                    .map(|row| row.iter().map(|c| Complex64::new(c[0], c[1])).collect())
                    .collect();
                let table = match &spec.orders {
                    Some(o) => CharacterTable::new(o.clone(), values)?,
                    None => CharacterTable::infer_orders(values)?,
                };
                Ok(GroupAction::diagonal_unitary(table))
            }
            "integer_shift" => Ok(GroupAction::integer_shift()),
            "multiset" => GroupAction::multiset(spec.d.unwrap_or(1)),
            "product" => match spec.factors.as_deref() {
                Some([a, b]) => GroupAction::product(GroupAction::try_from(a)?, GroupAction::try_from(b)?),
                _ => Err(Error::InvalidGroup("product requires exactly two `factors`".into())),
            },
            other => Err(Error::InvalidGroup(format!("unknown group kind `{other}`"))),
        }
    }
}

impl GroupAction {
    pub fn from_spec(spec: &GroupSpec) -> Result<Self> {
        GroupAction::try_from(spec)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let spec: GroupSpec = serde_json::from_str(text)?;
        GroupAction::from_spec(&spec)
    }

    pub fn to_spec(&self) -> GroupSpec {
        let mut spec = GroupSpec { kind: self.kind.name().to_string(), ..Default::default() };
        let complex_dim = self.ambient_dim.map(|d| d / 2);
        match &self.kind {
            ActionKind::FiniteMatrix => {
                spec.matrices = self.elements.as_ref().map(|els| {
                    els.iter()
                        .map(|m| {
                            let mut flat = Vec::with_capacity(m.len());
                            for r in 0..m.nrows() {
                                for c in 0..m.ncols() {
                                    flat.push(m[(r, c)]);
                                }
                            }
                            flat
                        })
                        .collect()
                });
            }
            ActionKind::Sign => spec.d = self.ambient_dim,
            ActionKind::Phase => spec.d = complex_dim,
            ActionKind::CyclicRotation { r } => {
                spec.r = Some(*r);
                spec.d = complex_dim;
            }
            ActionKind::Permutation { n, mode } => {
                spec.n = Some(*n);
                match mode {
                    PermutationMode::Coordinates => spec.mode = Some("coordinates".into()),
                    PermutationMode::Columns { d } => {
                        spec.mode = Some("columns".into());
                        spec.d = Some(*d);
                    }
                }
            }
            ActionKind::CircularShift { n, complex } => {
                spec.n = Some(*n);
                spec.complex = Some(*complex);
            }
            ActionKind::DiagonalUnitary(t) => {
                spec.orders = Some(t.orders().to_vec());
                spec.characters = Some(
                    t.generator_values()
                        .iter()
                        .map(|row| row.iter().map(|c| [c.re, c.im]).collect())
                        .collect(),
                );
            }
            ActionKind::IntegerShift => {}
            ActionKind::Multiset { d } => spec.d = Some(*d),
            ActionKind::Product(a, b) => spec.factors = Some(vec![a.to_spec(), b.to_spec()]),
        }
        spec
    }
}
