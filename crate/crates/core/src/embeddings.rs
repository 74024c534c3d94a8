//! Invariant maps into inner-product spaces and the constructions that turn
//! sphere-level maps into bilipschitz embeddings of the whole quotient.
//!
//! Claimed bounds are metadata propagated by each construction; nothing here
//! measures them (see [`crate::distortion::empirical_bilipschitz`]).

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{check_dim, Error, Result};
use crate::linalg::{as_complex, norm, scale};
use crate::quotient::{GroupAction, GroupSpec, QuotientPoint};

/// Inputs with norm below this are treated as the origin by homogeneous extension.
pub const ORIGIN_TOL: f64 = 1e-14;

type EvalFn = dyn Fn(&[f64]) -> Result<Vec<f64>> + Send + Sync;

/// A `G`-invariant map `V → R^m`, carrying optional claimed bounds `(α, β)`.
///
/// `unit_sphere_output` declares that unit-norm inputs have unit-norm outputs.
#[derive(Clone)]
pub struct InvariantMap {
    name: String,
    action: Arc<GroupAction>,
    target_dim: usize,
    claimed_alpha: Option<f64>,
    claimed_beta: Option<f64>,
    unit_sphere_output: bool,
    eval: Arc<EvalFn>,
}

impl fmt::Debug for InvariantMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("InvariantMap")
            .field("name", &self.name)
            .field("action", &self.action.kind().name())
            .field("target_dim", &self.target_dim)
            .field("claimed_alpha", &self.claimed_alpha)
            .field("claimed_beta", &self.claimed_beta)
            .field("unit_sphere_output", &self.unit_sphere_output)
            .finish()
    }
}

impl InvariantMap {
    pub fn new(
        name: impl Into<String>,
        action: Arc<GroupAction>,
        target_dim: usize,
        eval: impl Fn(&[f64]) -> Result<Vec<f64>> + Send + Sync + 'static,
    ) -> Self {
        InvariantMap {
            name: name.into(),
            action,
            target_dim,
            claimed_alpha: None,
            claimed_beta: None,
            unit_sphere_output: false,
            eval: Arc::new(eval),
        }
    }

    pub fn with_bounds(mut self, alpha: Option<f64>, beta: Option<f64>) -> Self {
        self.claimed_alpha = alpha;
        self.claimed_beta = beta;
        self
    }

    pub fn with_unit_sphere_output(mut self, flag: bool) -> Self {
        self.unit_sphere_output = flag;
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn action(&self) -> &Arc<GroupAction> {
        &self.action
    }

    pub fn target_dim(&self) -> usize {
        self.target_dim
    }

    pub fn claimed_alpha(&self) -> Option<f64> {
        self.claimed_alpha
    }

    pub fn claimed_beta(&self) -> Option<f64> {
        self.claimed_beta
    }

    pub fn claimed_distortion(&self) -> Option<f64> {
        Some(self.claimed_beta? / self.claimed_alpha?)
    }

    pub fn unit_sphere_output(&self) -> bool {
        self.unit_sphere_output
    }

    /// Evaluates on a representative vector.
    pub fn eval(&self, x: &[f64]) -> Result<Vec<f64>> {
        self.action.check_vector(x)?;
        let y = (self.eval)(x)?;
        check_dim(self.target_dim, y.len())?;
        Ok(y)
    }

    pub fn evaluate(&self, p: &QuotientPoint) -> Result<Vec<f64>> {
        if **p.action() != *self.action {
            return Err(Error::UnsupportedAction("point and map use different actions".into()));
        }
        self.eval(p.rep())
    }

    /// Multiplies every output by `s > 0`; bounds scale accordingly.
    pub fn rescaled(&self, s: f64) -> InvariantMap {
        let inner = self.clone();
        InvariantMap {
            name: format!("{s}*{}", self.name),
            action: self.action.clone(),
            target_dim: self.target_dim,
            claimed_alpha: self.claimed_alpha.map(|a| a * s),
            claimed_beta: self.claimed_beta.map(|b| b * s),
            unit_sphere_output: self.unit_sphere_output && (s - 1.0).abs() < 1e-15,
            eval: Arc::new(move |x| Ok(scale(&inner.eval(x)?, s))),
        }
    }
}

fn require_sphere_map(f: &InvariantMap) -> Result<()> {
    if f.unit_sphere_output {
        Ok(())
    } else {
        Err(Error::NotSphereMap)
    }
}

/// `f⋆([x]) = ‖x‖ f([x/‖x‖])`, `f⋆([0]) = 0`.
pub fn homogeneous_extension(f: &InvariantMap) -> Result<InvariantMap> {
    require_sphere_map(f)?;
    let inner = f.clone();
    let m = f.target_dim;
    Ok(InvariantMap::new(format!("ext({})", f.name), f.action.clone(), m, move |x| {
        let r = norm(x);
        if r < ORIGIN_TOL {
            return Ok(vec![0.0; m]);
        }
        Ok(scale(&inner.eval(&scale(x, 1.0 / r))?, r))
    })
    .with_bounds(f.claimed_alpha.map(|a| a.min(1.0)), f.claimed_beta.map(|b| b.max(1.0))))
}

/// `x ↦ (t f(x), √(1 − t²))` for `t ∈ (0, 1]`.
pub fn sphere_lift(f: &InvariantMap, t: f64) -> Result<InvariantMap> {
    require_sphere_map(f)?;
    if !(t > 0.0 && t <= 1.0) {
        return Err(Error::InvalidParameter(format!("lift parameter t = {t} must lie in (0, 1]")));
    }
    let inner = f.clone();
    let tail = (1.0 - t * t).max(0.0).sqrt();
    Ok(InvariantMap::new(format!("lift({}, {t})", f.name), f.action.clone(), f.target_dim + 1, move |x| {
        let mut y = scale(&inner.eval(x)?, t);
        y.push(tail);
        Ok(y)
    })
    .with_bounds(f.claimed_alpha.map(|a| a * t), f.claimed_beta.map(|b| b * t))
    .with_unit_sphere_output(true))
}

/// `x ↦ (t g(x), √(1 − ‖t g(x)‖²))` for `‖g‖ ≤ bound` and `0 < t < 1/bound`.
pub fn normalize_lift(g: &InvariantMap, bound: f64, t: f64) -> Result<InvariantMap> {
    if !(bound >= 0.0) || !(t > 0.0) || t * bound >= 1.0 {
        return Err(Error::InvalidParameter(format!(
            "normalizing lift needs t > 0 and t·bound < 1 (t = {t}, bound = {bound})"
        )));
    }
    let inner = g.clone();
    let upper = t * (1.0 - t * t * bound * bound).powf(-0.5);
    Ok(InvariantMap::new(format!("nlift({}, {t})", g.name), g.action.clone(), g.target_dim + 1, move |x| {
        let y = inner.eval(x)?;
        let ny = norm(&y);
        if ny > bound * (1.0 + 1e-12) + 1e-15 {
            return Err(Error::DomainViolation(format!("‖g(x)‖ = {ny} exceeds bound {bound}")));
        }
        let mut out = scale(&y, t);
        out.push((1.0 - t * t * ny * ny).max(0.0).sqrt());
        Ok(out)
    })
    .with_bounds(g.claimed_alpha.map(|a| a * t), g.claimed_beta.map(|b| b * upper))
    .with_unit_sphere_output(true))
}

/// `(x_1, x_2) ↦ (f_1(x_1), f_2(x_2))` over the product action.
///
/// With `rescale`, each factor is first divided by its claimed lower bound so
/// that the sum has claimed bounds `(1, max{β_1/α_1, β_2/α_2})`.
pub fn direct_sum(f1: &InvariantMap, f2: &InvariantMap, rescale: bool) -> Result<InvariantMap> {
    let (a, b) = if rescale {
        let s1 = f1.claimed_alpha.filter(|&a| a > 0.0).ok_or(Error::MissingBounds)?;
        let s2 = f2.claimed_alpha.filter(|&a| a > 0.0).ok_or(Error::MissingBounds)?;
        if f1.claimed_beta.is_none() || f2.claimed_beta.is_none() {
            return Err(Error::MissingBounds);
        }
        (f1.rescaled(1.0 / s1), f2.rescaled(1.0 / s2))
    } else {
        (f1.clone(), f2.clone())
    };
    let action = Arc::new(GroupAction::product((*a.action).clone(), (*b.action).clone())?);
    let split = a.action.ambient_dim().unwrap();
    let alpha = match (a.claimed_alpha, b.claimed_alpha) {
        (Some(x), Some(y)) => Some(x.min(y)),
        _ => None,
    };
    let beta = match (a.claimed_beta, b.claimed_beta) {
        (Some(x), Some(y)) => Some(x.max(y)),
        _ => None,
    };
    let name = format!("sum({}, {})", a.name, b.name);
    let m = a.target_dim + b.target_dim;
    Ok(InvariantMap::new(name, action, m, move |x| {
        let mut y = a.eval(&x[..split])?;
        y.extend(b.eval(&x[split..])?);
        Ok(y)
    })
    .with_bounds(alpha, beta))
}

/// Identity map of `R^d` under the trivial group; an isometry.
pub fn identity_map(d: usize) -> InvariantMap {
    InvariantMap::new("identity", Arc::new(GroupAction::trivial(d)), d, |x| Ok(x.to_vec()))
        .with_bounds(Some(1.0), Some(1.0))
}

/// `|x|` on `R` under `{±1}`; an isometry of `R/{±1}`.
pub fn absolute_value_map() -> InvariantMap {
    InvariantMap::new("abs", Arc::new(GroupAction::sign(1)), 1, |x| Ok(vec![x[0].abs()]))
        .with_bounds(Some(1.0), Some(1.0))
}

/// The constant map `x ↦ e_1 ∈ R^1` on a transitive sphere action.
pub fn constant_sphere_map(action: Arc<GroupAction>) -> InvariantMap {
    InvariantMap::new("const", action, 1, |_| Ok(vec![1.0]))
        .with_bounds(Some(1.0), Some(1.0))
        .with_unit_sphere_output(true)
}

/// Unnormalized `x ↦ x ⊗ x`, flattened row-major; neither Lipschitz nor lower Lipschitz.
pub fn outer_product_map(d: usize) -> InvariantMap {
    InvariantMap::new("outer", Arc::new(GroupAction::sign(d)), d * d, move |x| {
        Ok(x.iter().flat_map(|a| x.iter().map(move |b| a * b)).collect())
    })
}

/// `x ↦ x ⊗ x` with unit-norm outputs on `S(R^d)`.
pub fn projective_sphere_map(d: usize) -> InvariantMap {
    outer_product_map(d)
        .with_bounds(Some(1.0), Some(2f64.sqrt()))
        .with_unit_sphere_output(true)
}

/// `x ↦ x ⊗ x / ‖x‖` on `R^d/{±1}`, bounds `(1, √2)`.
pub fn real_projective_embed(d: usize) -> Result<InvariantMap> {
    if d < 2 {
        return Err(Error::UnsupportedDimension(d));
    }
    let mut f = homogeneous_extension(&projective_sphere_map(d))?;
    f.name = format!("projective({d})");
    Ok(f)
}

/// Unnormalized `x ↦ x x*` on `C^d`, as `d²` interleaved complex entries.
pub fn complex_outer_product_map(d: usize) -> InvariantMap {
    InvariantMap::new("complex_outer", Arc::new(GroupAction::phase(d)), 2 * d * d, move |x| {
        let z = as_complex(x);
        Ok(z.iter()
            .flat_map(|a| z.iter().map(move |b| a * b.conj()))
            .flat_map(|c| [c.re, c.im])
            .collect())
    })
}

/// `x ↦ x x* / ‖x‖` on `C^d` modulo unit phases, bounds `(1, √2)`.
pub fn complex_phase_embed(d: usize) -> Result<InvariantMap> {
    if d == 0 {
        return Err(Error::UnsupportedDimension(d));
    }
    let sphere = complex_outer_product_map(d)
        .with_bounds(Some(1.0), Some(2f64.sqrt()))
        .with_unit_sphere_output(true);
    let mut f = homogeneous_extension(&sphere)?;
    f.name = format!("complex_phase({d})");
    Ok(f)
}

/// Sphere bounds `(csc(π/2r), r)` of `z ↦ z^r` on `S(C)/⟨e^{2πi/r}⟩`.
pub fn power_sphere_bounds(r: usize) -> (f64, f64) {
    (1.0 / (PI / (2.0 * r as f64)).sin(), r as f64)
}

/// Raw `z ↦ z^r` on `C` modulo `r`-th roots of unity.
pub fn power_map_raw(r: usize) -> Result<InvariantMap> {
    let action = Arc::new(GroupAction::cyclic_rotation(r, 1)?);
    let (alpha, beta) = power_sphere_bounds(r);
    let ri = r as i32;
    Ok(InvariantMap::new(format!("z^{r}"), action, 2, move |x| {
        let w = num_complex::Complex64::new(x[0], x[1]).powi(ri);
        Ok(vec![w.re, w.im])
    })
    .with_bounds(Some(alpha), Some(beta))
    .with_unit_sphere_output(true))
}

/// Admissible lift parameters `[1/r, sin(π/2r)]` for [`power_map_embed`].
pub fn power_lift_interval(r: usize) -> (f64, f64) {
    (1.0 / r as f64, (PI / (2.0 * r as f64)).sin())
}

/// Homogeneous extension of the `t`-lifted `z^r`; `t` defaults to `1/r`.
pub fn power_map_embed(r: usize, t: Option<f64>) -> Result<InvariantMap> {
    let (lo, hi) = power_lift_interval(r.max(1));
    let t = t.unwrap_or(lo);
    if r == 0 || t < lo - 1e-12 || t > hi + 1e-12 {
        return Err(Error::InvalidParameter(format!("t = {t} outside [{lo}, {hi}]")));
    }
    let mut f = homogeneous_extension(&sphere_lift(&power_map_raw(r)?, t.min(1.0))?)?;
    f.name = format!("power({r}, {t})");
    Ok(f)
}

/// `√((a − b)² + ab·s²)`: distance between `[au]` and `[bv]` when `d([u],[v]) = s`.
pub fn radial_distance(a: f64, b: f64, sphere_dist: f64) -> Result<f64> {
    if a < 0.0 || b < 0.0 || sphere_dist < 0.0 {
        return Err(Error::InvalidParameter("radial distance needs nonnegative arguments".into()));
    }
    Ok(((a - b) * (a - b) + a * b * sphere_dist * sphere_dist).sqrt())
}

/// Max filter bank `x ↦ (⟨⟨[z_i],[x]⟩⟩)_i` as an invariant map.
pub fn max_filter_map(action: Arc<GroupAction>, templates: Vec<Vec<f64>>) -> Result<InvariantMap> {
    for z in &templates {
        action.check_vector(z)?;
    }
    let a = action.clone();
    let m = templates.len();
    Ok(InvariantMap::new("max_filter_bank", action, m, move |x| a.max_filter_bank(&templates, x)))
}

/// Embedding description file layout, tagged by `family`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum EmbeddingSpec {
    Projective { d: usize },
    ProjectiveRaw { d: usize },
    ProjectiveSphere { d: usize },
    ComplexPhase { d: usize },
    Power { r: usize, t: Option<f64> },
    PowerRaw { r: usize },
    Identity { d: usize },
    Abs,
    Lift { inner: Box<EmbeddingSpec>, t: f64 },
    Extension { inner: Box<EmbeddingSpec> },
    Sum { left: Box<EmbeddingSpec>, right: Box<EmbeddingSpec>, #[serde(default)] rescale: bool },
    MaxFilterBank { group: GroupSpec, templates: Vec<Vec<f64>> },
    Abelian { group: GroupSpec },
    Bispectrum { d: usize },
}

impl EmbeddingSpec {
    pub fn build(&self) -> Result<InvariantMap> {
        match self {
            EmbeddingSpec::Projective { d } => real_projective_embed(*d),
            EmbeddingSpec::ProjectiveRaw { d } => Ok(outer_product_map(*d)),
            EmbeddingSpec::ProjectiveSphere { d } => Ok(projective_sphere_map(*d)),
            EmbeddingSpec::ComplexPhase { d } => complex_phase_embed(*d),
            EmbeddingSpec::Power { r, t } => power_map_embed(*r, *t),
            EmbeddingSpec::PowerRaw { r } => power_map_raw(*r),
            EmbeddingSpec::Identity { d } => Ok(identity_map(*d)),
            EmbeddingSpec::Abs => Ok(absolute_value_map()),
            EmbeddingSpec::Lift { inner, t } => sphere_lift(&inner.build()?, *t),
            EmbeddingSpec::Extension { inner } => homogeneous_extension(&inner.build()?),
            EmbeddingSpec::Sum { left, right, rescale } => direct_sum(&left.build()?, &right.build()?, *rescale),
            EmbeddingSpec::MaxFilterBank { group, templates } => {
                max_filter_map(Arc::new(GroupAction::from_spec(group)?), templates.clone())
            }
            EmbeddingSpec::Abelian { group } => {
                let action = GroupAction::from_spec(group)?;
                let crate::quotient::ActionKind::DiagonalUnitary(table) = action.kind() else {
                    return Err(Error::InvalidGroup("abelian family needs a diagonal_unitary group".into()));
                };
                match crate::poly::abelian_exponents(table) {
                    crate::poly::AbelianExponents::Found(m) => crate::poly::abelian_invariant(table, &m),
                    crate::poly::AbelianExponents::FreenessFailure { i, j } => Err(Error::NotFree(format!(
                        "no exponent m with χ_{i} χ_{j}^m trivial"
                    ))),
                }
            }
            EmbeddingSpec::Bispectrum { d } => crate::applications::bispectrum_map(*d),
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::dist;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn extension_of_constant_map_is_norm() {
        let f = constant_sphere_map(Arc::new(GroupAction::phase(1)));
        let g = homogeneous_extension(&f).unwrap();
        assert_eq!(g.eval(&[3.0, 4.0]).unwrap(), vec![5.0]);
        assert_eq!(g.eval(&[0.0, 0.0]).unwrap(), vec![0.0]);
    }

    #[test]
    fn extension_requires_sphere_map() {
        assert_eq!(homogeneous_extension(&outer_product_map(2)).unwrap_err(), Error::NotSphereMap);
    }

    #[test]
    fn projective_embed_examples() {
        let f = real_projective_embed(2).unwrap();
        assert_eq!(f.claimed_alpha(), Some(1.0));
        assert!(close(f.claimed_beta().unwrap(), 2f64.sqrt(), 1e-15));
        assert_eq!(f.eval(&[1.0, 0.0]).unwrap(), vec![1.0, 0.0, 0.0, 0.0]);
        assert_eq!(f.eval(&[0.0, 0.0]).unwrap(), vec![0.0; 4]);
        let x = [0.3, -1.2];
        assert_eq!(f.eval(&x).unwrap(), f.eval(&[-0.3, 1.2]).unwrap());
        let (a, b) = ([0.6, 0.8], [1.0, 0.0]);
        let ratio = dist(&f.eval(&a).unwrap(), &f.eval(&b).unwrap())
            / f.action().quotient_distance(&a, &b).unwrap();
        assert!(close(ratio, (1.0f64 + 0.6).sqrt(), 1e-12));
    }

    #[test]
    fn complex_phase_examples() {
        let f = complex_phase_embed(2).unwrap();
        assert_eq!(f.target_dim(), 8);
        let a = f.eval(&[1.0, 0.0, 0.0, 0.0]).unwrap();
        let b = f.eval(&[0.0, 1.0, 0.0, 0.0]).unwrap();
        assert!(dist(&a, &b) < 1e-15);
        assert_eq!(f.eval(&[0.0; 4]).unwrap(), vec![0.0; 8]);
        // Unit x = e1, y = (e1 + i e2)/√2: |⟨x,y⟩|² = 1/2.
        let s = 0.5f64.sqrt();
        let y = [s, 0.0, 0.0, s];
        let out = dist(&a, &f.eval(&y).unwrap());
        let inp = f.action().quotient_distance(&[1.0, 0.0, 0.0, 0.0], &y).unwrap();
        assert!(close(out * out, 2.0 - 2.0 * 0.5, 1e-12));
        assert!(close(inp * inp, 2.0 - 2.0 * s, 1e-12));
    }

    #[test]
    fn lift_examples() {
        let f = power_map_raw(3).unwrap();
        let g = sphere_lift(&f, 1.0).unwrap();
        let y = g.eval(&[1.0, 0.0]).unwrap();
        assert_eq!(y.len(), 3);
        assert!(close(y[2], 0.0, 0.0));
        let id = identity_map(1).with_unit_sphere_output(true);
        let h = sphere_lift(&id, 0.5).unwrap();
        let d = dist(&h.eval(&[1.0]).unwrap(), &h.eval(&[-1.0]).unwrap());
        assert!(close(d, 1.0, 1e-15));
        assert!(sphere_lift(&id, 0.0).is_err());
        assert!(sphere_lift(&id, 1.5).is_err());
    }

    #[test]
    fn normalize_lift_examples() {
        let zero = InvariantMap::new("zero", Arc::new(GroupAction::trivial(2)), 2, |_| Ok(vec![0.0, 0.0]));
        let f = normalize_lift(&zero, 0.0, 3.0).unwrap();
        assert_eq!(f.eval(&[1.0, 2.0]).unwrap(), vec![0.0, 0.0, 1.0]);
        let id = identity_map(2);
        let f = normalize_lift(&id, 1.0, 0.5).unwrap();
        assert!(close(f.claimed_alpha().unwrap(), 0.5, 1e-15));
        assert!(close(f.claimed_beta().unwrap(), 0.5 / 0.75f64.sqrt(), 1e-15));
        assert!(normalize_lift(&id, 1.0, 1.0).is_err());
        assert!(matches!(f.eval(&[2.0, 0.0]), Err(Error::DomainViolation(_))));
        assert!(close(norm(&f.eval(&[0.3, 0.4]).unwrap()), 1.0, 1e-15));
    }

    #[test]
    fn direct_sum_of_identity_and_abs_is_isometry() {
        let f = direct_sum(&identity_map(1), &absolute_value_map(), true).unwrap();
        assert_eq!(f.claimed_alpha(), Some(1.0));
        assert_eq!(f.claimed_beta(), Some(1.0));
        let (x, y) = ([1.0, -2.0], [0.5, 3.0]);
        let out = dist(&f.eval(&x).unwrap(), &f.eval(&y).unwrap());
        assert!(close(out, f.action().quotient_distance(&x, &y).unwrap(), 1e-15));
        assert_eq!(direct_sum(&outer_product_map(2), &identity_map(1), true).unwrap_err(), Error::MissingBounds);
    }

    #[test]
    fn power_map_admissible_t() {
        assert!(power_map_embed(3, None).is_ok());
        assert!(power_map_embed(3, Some(0.5)).is_ok());
        assert!(power_map_embed(3, Some(0.2)).is_err());
        assert!(power_map_embed(3, Some(0.6)).is_err());
        let f = power_map_embed(1, None).unwrap();
        let d = dist(&f.eval(&[1.0, 0.0]).unwrap(), &f.eval(&[0.0, 1.0]).unwrap());
        assert!(close(d, 2f64.sqrt(), 1e-12));
        let (a, b) = power_sphere_bounds(3);
        assert!(close(a, 2.0, 1e-12) && b == 3.0);
    }

    #[test]
    fn radial_examples() {
        assert_eq!(radial_distance(1.0, 1.0, 0.7).unwrap(), 0.7);
        assert_eq!(radial_distance(2.0, 5.0, 0.0).unwrap(), 3.0);
        assert!(close(radial_distance(2.0, 3.0, 1.0).unwrap(), 7f64.sqrt(), 1e-15));
        assert!(radial_distance(-1.0, 1.0, 1.0).is_err());
    }

    #[test]
    fn spec_builds() {
        let s = EmbeddingSpec::from_json(r#"{"family":"sum","left":{"family":"identity","d":1},"right":{"family":"abs"},"rescale":true}"#)
            .unwrap();
        assert_eq!(s.build().unwrap().target_dim(), 2);
        let p = EmbeddingSpec::from_json(r#"{"family":"power","r":3}"#).unwrap();
        assert_eq!(p.build().unwrap().target_dim(), 3);
        assert!(EmbeddingSpec::from_json(r#"{"family":"nope"}"#).is_err());
    }
}
