use std::sync::Arc;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::embeddings::InvariantMap;
use crate::error::{Error, Result};
use crate::linalg::dist_sq;
use crate::quotient::{GroupAction, GroupSpec, QuotientPoint};

/// Largest deviation tolerated between a cached embedding and fresh evaluation.
pub const CACHE_TOL: f64 = 1e-12;

/// Points of one quotient, with an optional cache of their images under a map.
#[derive(Debug, Clone)]
pub struct Dataset {
    action: Arc<GroupAction>,
    points: Vec<QuotientPoint>,
    cache: Option<EmbeddedCache>,
}

#[derive(Debug, Clone)]
struct EmbeddedCache {
    map_name: String,
    vectors: Vec<Vec<f64>>,
}

/// On-disk layout `{"group": {...}, "points": [[...]]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DatasetFile {
    pub group: GroupSpec,
    pub points: Vec<Vec<f64>>,
}

impl Dataset {
    pub fn new(action: Arc<GroupAction>, reps: Vec<Vec<f64>>) -> Result<Self> {
        let points = reps
            .into_iter()
            .map(|r| QuotientPoint::new(action.clone(), r))
            .collect::<Result<Vec<_>>>()?;
        Ok(Dataset { action, points, cache: None })
    }

    pub fn from_points(points: Vec<QuotientPoint>) -> Result<Self> {
        let Some(first) = points.first() else {
            return Err(Error::EmptyDataset);
        };
        let action = first.action().clone();
        if points.iter().any(|p| !Arc::ptr_eq(p.action(), &action) && **p.action() != *action) {
            return Err(Error::UnsupportedAction("dataset points live over different actions".into()));
        }
        Ok(Dataset { action, points, cache: None })
    }

    pub fn action(&self) -> &Arc<GroupAction> {
        &self.action
    }

    pub fn points(&self) -> &[QuotientPoint] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    fn check_map(&self, map: &InvariantMap) -> Result<()> {
        if **map.action() != *self.action {
            return Err(Error::UnsupportedAction(format!(
                "map `{}` is invariant under a different action",
                map.name()
            )));
        }
        Ok(())
    }

    /// Evaluates `map` on every point and stores the result.
    pub fn cache_embedding(&mut self, map: &InvariantMap) -> Result<()> {
        let vectors = self.evaluate(map)?;
        self.cache = Some(EmbeddedCache { map_name: map.name().to_string(), vectors });
        Ok(())
    }

    fn evaluate(&self, map: &InvariantMap) -> Result<Vec<Vec<f64>>> {
        self.check_map(map)?;
        self.points.iter().map(|p| map.evaluate(p)).collect()
    }

    /// Images of the points under `map`, reusing the cache when it was built from
    /// a map of the same name.
    pub fn embedded(&self, map: &InvariantMap) -> Result<Vec<Vec<f64>>> {
        match &self.cache {
            Some(c) if c.map_name == map.name() => {
                self.check_map(map)?;
                Ok(c.vectors.clone())
            }
            _ => self.evaluate(map),
        }
    }

    /// Largest coordinate gap between the cache and fresh evaluation of `map`.
    pub fn cache_deviation(&self, map: &InvariantMap) -> Result<Option<f64>> {
        let Some(c) = &self.cache else {
            return Ok(None);
        };
        let fresh = self.evaluate(map)?;
        let dev = c
            .vectors
            .iter()
            .zip(&fresh)
            .flat_map(|(a, b)| a.iter().zip(b).map(|(u, v)| (u - v).abs()))
            .fold(0.0f64, f64::max);
        Ok(Some(dev))
    }

    /// Squared quotient distances.
    pub fn quotient_sq_distances(&self) -> Result<DMatrix<f64>> {
        let n = self.len();
        let mut d = DMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..i {
                let v = self.points[i].distance(&self.points[j])?;
                d[(i, j)] = v * v;
                d[(j, i)] = v * v;
            }
        }
        Ok(d)
    }

    /// Squared distances between the images under `map`.
    pub fn embedded_sq_distances(&self, map: &InvariantMap) -> Result<DMatrix<f64>> {
        let e = self.embedded(map)?;
        let n = e.len();
        Ok(DMatrix::from_fn(n, n, |i, j| dist_sq(&e[i], &e[j])))
    }

    pub fn to_file(&self) -> DatasetFile {
        DatasetFile { group: self.action.to_spec(), points: self.points.iter().map(|p| p.rep().to_vec()).collect() }
    }

    pub fn from_file(f: &DatasetFile) -> Result<Self> {
        Dataset::new(Arc::new(GroupAction::from_spec(&f.group)?), f.points.clone())
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Dataset::from_file(&serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_file()).expect("dataset serializes")
    }
}

/// Index of the point whose image is nearest to the image of `query`.
///
/// Exact search in the target space returns a `β/α`-approximate nearest neighbor
/// in the quotient. Ties go to the smallest index.
pub fn pullback_ann(data: &Dataset, map: &InvariantMap, query: &QuotientPoint) -> Result<usize> {
    if data.is_empty() {
        return Err(Error::EmptyDataset);
    }
    let q = map.evaluate(query)?;
    let e = data.embedded(map)?;
    let mut best = (0, f64::INFINITY);
    for (i, v) in e.iter().enumerate() {
        let d = dist_sq(v, &q);
        if d < best.1 {
            best = (i, d);
        }
    }
    Ok(best.0)
}

/// Index of the true quotient nearest neighbor, by exhaustive search.
pub fn quotient_nearest(data: &Dataset, query: &QuotientPoint) -> Result<usize> {
    if data.is_empty() {
        return Err(Error::EmptyDataset);
    }
    let mut best = (0, f64::INFINITY);
    for (i, p) in data.points().iter().enumerate() {
        let d = p.distance(query)?;
        if d < best.1 {
            best = (i, d);
        }
    }
    Ok(best.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::embeddings::{identity_map, real_projective_embed};

    #[test]
    fn single_point_is_returned() {
        let f = identity_map(2);
        let data = Dataset::new(f.action().clone(), vec![vec![3.0, 1.0]]).unwrap();
        let q = QuotientPoint::new(f.action().clone(), vec![-5.0, 0.0]).unwrap();
        assert_eq!(pullback_ann(&data, &f, &q).unwrap(), 0);
    }

    #[test]
    fn empty_dataset_is_rejected() {
        let f = identity_map(2);
        let data = Dataset::new(f.action().clone(), vec![]).unwrap();
        let q = QuotientPoint::new(f.action().clone(), vec![0.0, 0.0]).unwrap();
        assert_eq!(pullback_ann(&data, &f, &q), Err(Error::EmptyDataset));
    }

    #[test]
    fn isometry_finds_true_neighbor() {
        let f = identity_map(1);
        let data = Dataset::new(f.action().clone(), vec![vec![0.0], vec![2.0], vec![5.0]]).unwrap();
        let q = QuotientPoint::new(f.action().clone(), vec![1.9]).unwrap();
        assert_eq!(pullback_ann(&data, &f, &q).unwrap(), 1);
        assert_eq!(quotient_nearest(&data, &q).unwrap(), 1);
    }

    #[test]
    fn cache_matches_evaluation() {
        let f = real_projective_embed(2).unwrap();
        let mut data = Dataset::new(f.action().clone(), vec![vec![1.0, 2.0], vec![-0.5, 0.1]]).unwrap();
        assert_eq!(data.cache_deviation(&f).unwrap(), None);
        data.cache_embedding(&f).unwrap();
        assert!(data.cache_deviation(&f).unwrap().unwrap() <= CACHE_TOL);
    }

    #[test]
    fn map_over_other_action_is_rejected() {
        let f = real_projective_embed(2).unwrap();
        let data = Dataset::new(identity_map(2).action().clone(), vec![vec![1.0, 0.0]]).unwrap();
        assert!(matches!(data.embedded(&f), Err(Error::UnsupportedAction(_))));
    }

    #[test]
    fn json_round_trip() {
        let f = real_projective_embed(2).unwrap();
        let data = Dataset::new(f.action().clone(), vec![vec![1.0, 2.0], vec![-0.5, 0.1]]).unwrap();
        let back = Dataset::from_json(&data.to_json()).unwrap();
        assert_eq!(back.points(), data.points());
    }
}
