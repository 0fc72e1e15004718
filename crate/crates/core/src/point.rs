use std::ops::Deref;

use crate::error::{invalid, Result};

/// Tolerance for membership in `[0, 1]`. Values within it are clamped.
pub const COORD_TOL: f64 = 1e-12;

/// A point of the unit cube `[0, 1]^n`.
#[derive(Clone, Debug, PartialEq)]
pub struct FractionalPoint(Vec<f64>);

impl FractionalPoint {
    /// Validates and clamps `coords` into the unit cube.
    pub fn new(mut coords: Vec<f64>) -> Result<Self> {
        for (i, c) in coords.iter_mut().enumerate() {
            if !c.is_finite() || *c < -COORD_TOL || *c > 1.0 + COORD_TOL {
                return Err(invalid(format!("coordinate {i} = {c} is outside [0, 1]")));
            }
            *c = c.clamp(0.0, 1.0);
        }
        Ok(FractionalPoint(coords))
    }

    pub fn zeros(n: usize) -> Self {
        FractionalPoint(vec![0.0; n])
    }

    /// Indicator vector of `set` in dimension `n`.
    pub fn indicator(n: usize, set: &[usize]) -> Result<Self> {
        let mut v = vec![0.0; n];
        for &i in set {
            if i >= n {
                return Err(invalid(format!("index {i} out of range for dimension {n}")));
            }
            v[i] = 1.0;
        }
        Ok(FractionalPoint(v))
    }

    pub(crate) fn from_raw(coords: Vec<f64>) -> Self {
        debug_assert!(coords.iter().all(|c| (0.0..=1.0).contains(c)));
        FractionalPoint(coords)
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }
}

impl Deref for FractionalPoint {
    type Target = [f64];
    fn deref(&self) -> &[f64] {
        &self.0
    }
}

/// A (super)gradient estimate.
#[derive(Clone, Debug, PartialEq)]
pub struct Subgradient(pub Vec<f64>);

impl Subgradient {
    pub fn zeros(n: usize) -> Self {
        Subgradient(vec![0.0; n])
    }

    pub fn norm(&self) -> f64 {
        self.0.iter().map(|g| g * g).sum::<f64>().sqrt()
    }

    pub fn dot(&self, other: &[f64]) -> f64 {
        self.0.iter().zip(other).map(|(a, b)| a * b).sum()
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|g| g.is_finite())
    }
}

impl Deref for Subgradient {
    type Target = [f64];
    fn deref(&self) -> &[f64] {
        &self.0
    }
}

pub(crate) fn check_dim(expected: usize, got: usize) -> Result<()> {
    if expected != got {
        return Err(invalid(format!(
            "dimension mismatch: expected {expected}, got {got}"
        )));
    }
    Ok(())
}
