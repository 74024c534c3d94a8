use std::sync::Arc;

use crate::error::{Error, Result};
use crate::quotient::GroupAction;

/// Two points closer than this in the quotient metric are equal.
pub const POINT_EQ_TOL: f64 = 1e-9;

/// A representative tagged with its action; stands for the orbit closure `[x]`.
#[derive(Debug, Clone)]
pub struct QuotientPoint {
    rep: Vec<f64>,
    action: Arc<GroupAction>,
}

impl QuotientPoint {
    pub fn new(action: Arc<GroupAction>, rep: Vec<f64>) -> Result<Self> {
        action.check_vector(&rep)?;
        Ok(QuotientPoint { rep, action })
    }

    pub fn rep(&self) -> &[f64] {
        &self.rep
    }

    pub fn action(&self) -> &Arc<GroupAction> {
        &self.action
    }

    fn same_action(&self, other: &QuotientPoint) -> Result<()> {
        if Arc::ptr_eq(&self.action, &other.action) || *self.action == *other.action {
            Ok(())
        } else {
            Err(Error::UnsupportedAction("points live over different actions".into()))
        }
    }

    pub fn distance(&self, other: &QuotientPoint) -> Result<f64> {
        self.same_action(other)?;
        self.action.quotient_distance(&self.rep, &other.rep)
    }

    pub fn max_filter(&self, other: &QuotientPoint) -> Result<f64> {
        self.same_action(other)?;
        self.action.max_filter(&self.rep, &other.rep)
    }
}

impl PartialEq for QuotientPoint {
    fn eq(&self, other: &Self) -> bool {
        self.distance(other).is_ok_and(|d| d <= POINT_EQ_TOL)
    }
}
