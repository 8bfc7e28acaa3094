//! Brute-force equilibrium search on a rectangular strategy grid.
//!
//! The payoff table is filled row by row (in parallel when enabled), then each
//! player's best reply to every opponent column/row is found and a cell is
//! kept when neither player can gain more than `tol` by a unilateral move on
//! the grid. Cells whose payoff is `None` are unplayable and skipped both as
//! candidates and as deviations.

use serde::Serialize;

use crate::par::{map_indexed, Execution};

/// Evenly spaced points `0, 1/(n-1), ..., 1`.
pub fn unit_grid(n: usize) -> Vec<f64> {
    assert!(n >= 2, "grid needs at least two points");
    (0..n).map(|i| i as f64 / (n - 1) as f64).collect()
}

/// A connected (4-neighbour) cluster of grid equilibria.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Cluster {
    pub size: usize,
    pub centroid: (f64, f64),
    pub min: (f64, f64),
    pub max: (f64, f64),
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GridEquilibria {
    /// Equilibrium coordinates, sorted by the first then the second component.
    pub points: Vec<(f64, f64)>,
    pub clusters: Vec<Cluster>,
    /// Some equilibria touch each other on the grid, as along a segment or
    /// across a region of indifference. With a positive `tol` a cluster can
    /// also be the blurred image of a single equilibrium.
    pub continuum: bool,
    pub skipped: usize,
    pub tol: f64,
}

impl GridEquilibria {
    /// Chebyshev distance from `target` to the nearest grid equilibrium.
    pub fn distance_to(&self, target: (f64, f64)) -> Option<f64> {
        self.points
            .iter()
            .map(|&(x, y)| (x - target.0).abs().max((y - target.1).abs()))
            .min_by(f64::total_cmp)
    }
}

/// Grid search over `xs` (player A) by `ys` (player B).
pub fn search<F>(xs: &[f64], ys: &[f64], tol: f64, exec: Execution, payoff: F) -> GridEquilibria
where
    F: Fn(usize, usize) -> Option<(f64, f64)> + Sync + Send,
{
    let (na, nb) = (xs.len(), ys.len());
    let table: Vec<Vec<Option<(f64, f64)>>> = map_indexed(na, exec, |i| (0..nb).map(|j| payoff(i, j)).collect());

    // A's best payoff against each column, B's best against each row.
    let mut best_a = vec![f64::NEG_INFINITY; nb];
    for row in &table {
        for (j, cell) in row.iter().enumerate() {
            if let Some((pa, _)) = cell {
                best_a[j] = best_a[j].max(*pa);
            }
        }
    }
    let best_b: Vec<f64> = table
        .iter()
        .map(|row| row.iter().flatten().map(|c| c.1).fold(f64::NEG_INFINITY, f64::max))
        .collect();

    let mut is_ne = vec![vec![false; nb]; na];
    let mut skipped = 0;
    for i in 0..na {
        for j in 0..nb {
            match table[i][j] {
                Some((pa, pb)) => is_ne[i][j] = pa >= best_a[j] - tol && pb >= best_b[i] - tol,
                None => skipped += 1,
            }
        }
    }

    let mut points = Vec::new();
    for (i, row) in is_ne.iter().enumerate() {
        for (j, &ne) in row.iter().enumerate() {
            if ne {
                points.push((xs[i], ys[j]));
            }
        }
    }
    points.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));

    let clusters = clusters(&is_ne, xs, ys);
    let continuum = clusters.iter().any(|c| c.size > 1);
    GridEquilibria {
        points,
        clusters,
        continuum,
        skipped,
        tol,
    }
}

fn clusters(is_ne: &[Vec<bool>], xs: &[f64], ys: &[f64]) -> Vec<Cluster> {
    let (na, nb) = (xs.len(), ys.len());
    let mut seen = vec![vec![false; nb]; na];
    let mut out = Vec::new();
    for si in 0..na {
        for sj in 0..nb {
            if !is_ne[si][sj] || seen[si][sj] {
                continue;
            }
            seen[si][sj] = true;
            let mut stack = vec![(si, sj)];
            let mut size = 0usize;
            let mut sum = (0.0, 0.0);
            let mut min = (f64::INFINITY, f64::INFINITY);
            let mut max = (f64::NEG_INFINITY, f64::NEG_INFINITY);
            while let Some((i, j)) = stack.pop() {
                size += 1;
                let (x, y) = (xs[i], ys[j]);
                sum = (sum.0 + x, sum.1 + y);
                min = (min.0.min(x), min.1.min(y));
                max = (max.0.max(x), max.1.max(y));
                let neighbours = [(i.wrapping_sub(1), j), (i + 1, j), (i, j.wrapping_sub(1)), (i, j + 1)];
                for (ni, nj) in neighbours {
                    if ni < na && nj < nb && is_ne[ni][nj] && !seen[ni][nj] {
                        seen[ni][nj] = true;
                        stack.push((ni, nj));
                    }
                }
            }
            let n = size as f64;
            out.push(Cluster {
                size,
                centroid: (sum.0 / n, sum.1 / n),
                min,
                max,
            });
        }
    }
    out
}

/// Largest gain either player obtains by a unilateral switch to one of
/// `grid_n` evenly spaced strategies in [0, 1]. Unplayable deviations are
/// ignored; `None` if the profile itself is unplayable.
pub fn max_deviation_gain<F>(p_a: f64, p_b: f64, grid_n: usize, payoff: F) -> Option<f64>
where
    F: Fn(f64, f64) -> Option<(f64, f64)>,
{
    let (base_a, base_b) = payoff(p_a, p_b)?;
    let mut worst = f64::NEG_INFINITY;
    for x in unit_grid(grid_n) {
        if let Some((a, _)) = payoff(x, p_b) {
            worst = worst.max(a - base_a);
        }
        if let Some((_, b)) = payoff(p_a, x) {
            worst = worst.max(b - base_b);
        }
    }
    Some(worst)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pd(i: f64, j: f64) -> (f64, f64) {
        // PD(3,0,5,1): A coeffs (-1,-1,4,1), B is the transpose
        (-i * j - i + 4.0 * j + 1.0, -i * j + 4.0 * i - j + 1.0)
    }

    #[test]
    fn classical_pd_on_101_grid() {
        let g = unit_grid(101);
        let r = search(&g, &g, 1e-9, Execution::Sequential, |i, j| Some(pd(g[i], g[j])));
        assert_eq!(r.points, vec![(0.0, 0.0)]);
        assert!(!r.continuum);
    }

    #[test]
    fn constant_game_is_all_equilibria() {
        let g = unit_grid(11);
        let r = search(&g, &g, 1e-9, Execution::Parallel, |_, _| Some((1.0, 1.0)));
        assert_eq!(r.points.len(), 121);
        assert!(r.continuum);
        assert_eq!(r.clusters.len(), 1);
    }

    #[test]
    fn unplayable_cells_are_skipped() {
        let g = unit_grid(5);
        let r = search(&g, &g, 1e-9, Execution::Sequential, |i, j| {
            (i != 0).then(|| pd(g[i], g[j]))
        });
        assert_eq!(r.skipped, 5);
        assert_eq!(r.points, vec![(0.25, 0.0)]);
    }

    #[test]
    fn parallel_and_sequential_agree() {
        let g = unit_grid(201);
        let f = |i: usize, j: usize| Some(pd(g[i], g[j]));
        let a = search(&g, &g, 1e-3, Execution::Sequential, f);
        let b = search(&g, &g, 1e-3, Execution::Parallel, f);
        assert_eq!(a, b);
    }

    #[test]
    fn deviation_gain() {
        let f = |a: f64, b: f64| Some(pd(a, b));
        assert!(max_deviation_gain(0.0, 0.0, 1001, f).unwrap() <= 0.0);
        assert!(max_deviation_gain(1.0, 1.0, 1001, f).unwrap() > 1.0);
        assert_eq!(max_deviation_gain(0.0, 0.0, 11, |_, _| None), None);
    }
}
