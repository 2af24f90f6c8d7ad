use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use rayon::prelude::*;

use crate::sparse::SparseVector;

/// `exp(−γ‖x − y‖²)`.
pub fn rbf_kernel(x: &SparseVector, y: &SparseVector, gamma: f64) -> f64 {
    (-gamma * x.squared_distance(y)).exp()
}

/// Rows below this length are computed on the calling thread.
const PARALLEL_ROW_MIN: usize = 2048;

/// LRU cache of full kernel rows over a fixed point set.
///
/// Shared by every binary problem trained on the same points; rows are
/// computed outside the lock, so concurrent misses on one row may compute it
/// twice, with identical results.
pub struct KernelCache<'a> {
    points: &'a [SparseVector],
    gamma: f64,
    capacity_rows: usize,
    state: Mutex<LruState>,
}

struct LruState {
    rows: HashMap<usize, (Arc<[f64]>, u64)>,
    clock: u64,
    hits: u64,
    misses: u64,
}

impl<'a> KernelCache<'a> {
    /// `budget_bytes` bounds the cached rows; at least two rows are always kept.
    pub fn new(points: &'a [SparseVector], gamma: f64, budget_bytes: usize) -> Self {
        let row_bytes = (points.len() * std::mem::size_of::<f64>()).max(1);
        let capacity_rows = (budget_bytes / row_bytes).max(2);
        Self {
            points,
            gamma,
            capacity_rows,
            state: Mutex::new(LruState {
                rows: HashMap::new(),
                clock: 0,
                hits: 0,
                misses: 0,
            }),
        }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn points(&self) -> &'a [SparseVector] {
        self.points
    }

    pub fn capacity_rows(&self) -> usize {
        self.capacity_rows
    }

    /// (hits, misses) since construction.
    pub fn stats(&self) -> (u64, u64) {
        let s = self.state.lock().unwrap();
        (s.hits, s.misses)
    }

    fn compute_row(&self, i: usize) -> Arc<[f64]> {
        let xi = &self.points[i];
        let eval = |(t, xt): (usize, &SparseVector)| {
            if t == i {
                1.0
            } else {
                rbf_kernel(xi, xt, self.gamma)
            }
        };
        let row: Vec<f64> = if self.points.len() >= PARALLEL_ROW_MIN {
            self.points.par_iter().enumerate().map(eval).collect()
        } else {
            self.points.iter().enumerate().map(eval).collect()
        };
        row.into()
    }

    /// Kernel values between point `i` and every point.
    pub fn row(&self, i: usize) -> Arc<[f64]> {
        {
            let mut s = self.state.lock().unwrap();
            s.clock += 1;
            let now = s.clock;
            if let Some((row, used)) = s.rows.get_mut(&i) {
                *used = now;
                let row = Arc::clone(row);
                s.hits += 1;
                return row;
            }
            s.misses += 1;
        }
        let row = self.compute_row(i);
        let mut s = self.state.lock().unwrap();
        if !s.rows.contains_key(&i) {
            if s.rows.len() >= self.capacity_rows {
                let oldest = s
                    .rows
                    .iter()
                    .min_by_key(|(k, (_, used))| (*used, **k))
                    .map(|(k, _)| *k);
                if let Some(k) = oldest {
                    s.rows.remove(&k);
                }
            }
            s.clock += 1;
            let now = s.clock;
            s.rows.insert(i, (Arc::clone(&row), now));
        }
        row
    }
}
