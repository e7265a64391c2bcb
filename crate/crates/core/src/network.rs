//! Cell topology, UE population and fluid-flow mobility.
//!
//! Cells are indexed from 0 in row-major order over a `grid_rows × grid_cols`
//! layout of pointy-top hexagons where odd rows are shifted half a cell to
//! the right.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// UE count served by each cell, either one value for every cell or an
/// explicit per-cell list.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum UserCounts {
    Uniform(f64),
    PerCell(Vec<f64>),
}

impl UserCounts {
    pub fn get(&self, cell: usize) -> f64 {
        match self {
            UserCounts::Uniform(v) => *v,
            UserCounts::PerCell(v) => v[cell],
        }
    }

    pub fn total(&self, num_cells: usize) -> f64 {
        (0..num_cells).map(|k| self.get(k)).sum()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct NetworkConfig {
    pub num_cells: usize,
    pub num_lists: usize,
    /// Cells per list.
    pub list_size: usize,
    /// Upper bound on the off-diagonal one-count of an expanded list matrix.
    pub max_offdiag: usize,
    pub users_per_cell: UserCounts,
    /// Paging arrivals per UE per unit time.
    pub paging_rate: f64,
    /// Hexagon side length in meters.
    pub cell_radius: f64,
    /// Admissible UE speeds in m/s.
    pub speed_range: [f64; 2],
    pub tau_cost: f64,
    pub relocation_cost: f64,
    pub paging_cost: f64,
    pub grid_rows: usize,
    pub grid_cols: usize,
}

impl Default for NetworkConfig {
    fn default() -> Self {
        Self {
            num_cells: 30,
            num_lists: 10,
            list_size: 16,
            max_offdiag: 16 * 15,
            users_per_cell: UserCounts::Uniform(100.0),
            paging_rate: 0.05,
            cell_radius: 500.0,
            speed_range: [0.0, 33.0],
            tau_cost: 1.0,
            relocation_cost: 1.0,
            paging_cost: 1.0,
            grid_rows: 5,
            grid_cols: 6,
        }
    }
}

impl NetworkConfig {
    /// A square-ish instance with uniform users and unit cost constants.
    pub fn uniform(
        grid_rows: usize,
        grid_cols: usize,
        num_lists: usize,
        list_size: usize,
        users: f64,
    ) -> Self {
        Self {
            num_cells: grid_rows * grid_cols,
            num_lists,
            list_size,
            max_offdiag: list_size * list_size.saturating_sub(1),
            users_per_cell: UserCounts::Uniform(users),
            grid_rows,
            grid_cols,
            ..Self::default()
        }
    }

    pub fn users(&self, cell: usize) -> f64 {
        self.users_per_cell.get(cell)
    }

    pub fn hex_area(&self) -> f64 {
        1.5 * 3f64.sqrt() * self.cell_radius * self.cell_radius
    }

    pub fn perimeter(&self) -> f64 {
        6.0 * self.cell_radius
    }

    /// Full validation, including the strict `list_size < num_cells` rule.
    pub fn validate(&self) -> Result<()> {
        self.check_dimensions()?;
        if self.list_size >= self.num_cells {
            return Err(Error::config(
                "list_size",
                format!(
                    "must be smaller than num_cells ({} >= {})",
                    self.list_size, self.num_cells
                ),
            ));
        }
        Ok(())
    }

    /// Structural checks shared by every consumer. Allows `list_size == num_cells`
    /// so degenerate single-membership instances can still be enumerated.
    pub(crate) fn check_dimensions(&self) -> Result<()> {
        if self.num_cells == 0 {
            return Err(Error::config("num_cells", "must be at least 1"));
        }
        if self.num_lists == 0 {
            return Err(Error::config("num_lists", "must be at least 1"));
        }
        if self.list_size == 0 || self.list_size > self.num_cells {
            return Err(Error::config(
                "list_size",
                format!("must lie in [1, {}], got {}", self.num_cells, self.list_size),
            ));
        }
        if self.grid_rows * self.grid_cols != self.num_cells {
            return Err(Error::config(
                "grid_rows",
                format!(
                    "{}x{} grid does not hold {} cells",
                    self.grid_rows, self.grid_cols, self.num_cells
                ),
            ));
        }
        let needed = self.list_size * (self.list_size - 1);
        if self.max_offdiag < needed {
            return Err(Error::config(
                "max_offdiag",
                format!("{} cannot hold a full list of {} cells (needs {needed})", self.max_offdiag, self.list_size),
            ));
        }
        if let UserCounts::PerCell(v) = &self.users_per_cell {
            if v.len() != self.num_cells {
                return Err(Error::config(
                    "users_per_cell",
                    format!("expected {} entries, got {}", self.num_cells, v.len()),
                ));
            }
        }
        for k in 0..self.num_cells {
            let u = self.users(k);
            if !(u.is_finite() && u >= 0.0) {
                return Err(Error::config(
                    "users_per_cell",
                    format!("cell {k} has invalid count {u}"),
                ));
            }
        }
        for (field, v) in [
            ("paging_rate", self.paging_rate),
            ("tau_cost", self.tau_cost),
            ("relocation_cost", self.relocation_cost),
            ("paging_cost", self.paging_cost),
        ] {
            if !(v.is_finite() && v >= 0.0) {
                return Err(Error::config(field, format!("must be finite and >= 0, got {v}")));
            }
        }
        if !(self.cell_radius.is_finite() && self.cell_radius > 0.0) {
            return Err(Error::config("cell_radius", "must be positive"));
        }
        let [lo, hi] = self.speed_range;
        if !(lo.is_finite() && hi.is_finite() && 0.0 <= lo && lo <= hi) {
            return Err(Error::config(
                "speed_range",
                format!("expected 0 <= lo <= hi, got [{lo}, {hi}]"),
            ));
        }
        Ok(())
    }
}

/// Symmetric cell adjacency.
#[derive(Debug, Clone, PartialEq)]
pub struct Adjacency {
    n: usize,
    neighbors: Vec<Vec<usize>>,
}

impl Adjacency {
    pub fn from_neighbors(neighbors: Vec<Vec<usize>>) -> Self {
        Self {
            n: neighbors.len(),
            neighbors,
        }
    }

    pub fn num_cells(&self) -> usize {
        self.n
    }

    pub fn neighbors(&self, cell: usize) -> &[usize] {
        &self.neighbors[cell]
    }

    pub fn degree(&self, cell: usize) -> usize {
        self.neighbors[cell].len()
    }

    pub fn is_adjacent(&self, a: usize, b: usize) -> bool {
        self.neighbors[a].contains(&b)
    }

    /// Dense boolean matrix, row-major.
    pub fn to_matrix(&self) -> Vec<Vec<bool>> {
        let mut m = vec![vec![false; self.n]; self.n];
        for (k, row) in self.neighbors.iter().enumerate() {
            for &n in row {
                m[k][n] = true;
            }
        }
        m
    }
}

/// Offset-row hexagonal adjacency for the configured grid.
pub fn build_topology(config: &NetworkConfig) -> Result<Adjacency> {
    let (rows, cols) = (config.grid_rows, config.grid_cols);
    if rows * cols != config.num_cells {
        return Err(Error::config(
            "grid_rows",
            format!("{rows}x{cols} grid does not hold {} cells", config.num_cells),
        ));
    }
    let index = |r: isize, c: isize| -> Option<usize> {
        (r >= 0 && c >= 0 && (r as usize) < rows && (c as usize) < cols)
            .then(|| r as usize * cols + c as usize)
    };
    let mut neighbors = Vec::with_capacity(config.num_cells);
    for r in 0..rows as isize {
        for c in 0..cols as isize {
            // Odd rows sit half a cell to the right of even rows.
            let shift = if r % 2 == 0 { -1 } else { 0 };
            let candidates = [
                (r, c - 1),
                (r, c + 1),
                (r - 1, c + shift),
                (r - 1, c + shift + 1),
                (r + 1, c + shift),
                (r + 1, c + shift + 1),
            ];
            let mut row: Vec<usize> = candidates
                .iter()
                .filter_map(|&(rr, cc)| index(rr, cc))
                .collect();
            row.sort_unstable();
            neighbors.push(row);
        }
    }
    Ok(Adjacency::from_neighbors(neighbors))
}

/// Fluid-flow boundary crossing rate of one cell: `ρ·PM·v/π` with the UE
/// density `ρ` taken over the hexagon area.
pub fn crossing_rate(config: &NetworkConfig, cell: usize, speed: f64) -> f64 {
    let density = config.users(cell) / config.hex_area();
    density * config.perimeter() * speed / PI
}

/// Per-UE crossing rate, i.e. `crossing_rate / UE_k`, which does not depend
/// on the cell population.
fn per_user_crossing_rate(config: &NetworkConfig, speed: f64) -> f64 {
    config.perimeter() * speed / (PI * config.hex_area())
}

/// Per-UE transition rates between adjacent cells.
#[derive(Debug, Clone, PartialEq)]
pub struct MobilityModel {
    n: usize,
    prob: Vec<f64>,
    /// Nonzero entries of each row as `(target, rate)`.
    rows: Vec<Vec<(usize, f64)>>,
    adjacency: Adjacency,
}

impl MobilityModel {
    /// Wraps an explicit rate matrix after checking the model invariants.
    pub fn from_matrix(prob: Vec<Vec<f64>>, adjacency: Adjacency) -> Result<Self> {
        let n = adjacency.num_cells();
        if prob.len() != n || prob.iter().any(|r| r.len() != n) {
            return Err(Error::config("prob", format!("expected a {n}x{n} matrix")));
        }
        let mut flat = vec![0.0; n * n];
        let mut rows = vec![Vec::new(); n];
        for k in 0..n {
            let mut sum = 0.0;
            for m in 0..n {
                let p = prob[k][m];
                if !(p.is_finite() && p >= 0.0) {
                    return Err(Error::config("prob", format!("entry ({k},{m}) = {p}")));
                }
                if p > 0.0 && (k == m || !adjacency.is_adjacent(k, m)) {
                    return Err(Error::config(
                        "prob",
                        format!("entry ({k},{m}) is nonzero but the cells are not adjacent"),
                    ));
                }
                sum += p;
                flat[k * n + m] = p;
                if p > 0.0 {
                    rows[k].push((m, p));
                }
            }
            if sum > 1.0 + 1e-12 {
                return Err(Error::config("prob", format!("row {k} sums to {sum} > 1")));
            }
        }
        Ok(Self {
            n,
            prob: flat,
            rows,
            adjacency,
        })
    }

    pub fn num_cells(&self) -> usize {
        self.n
    }

    pub fn prob(&self, from: usize, to: usize) -> f64 {
        self.prob[from * self.n + to]
    }

    /// Nonzero outgoing rates of `cell`.
    pub fn outgoing(&self, cell: usize) -> &[(usize, f64)] {
        &self.rows[cell]
    }

    pub fn adjacency(&self) -> &Adjacency {
        &self.adjacency
    }

    pub fn row_sum(&self, cell: usize) -> f64 {
        self.rows[cell].iter().map(|&(_, p)| p).sum()
    }

    pub fn to_matrix(&self) -> Vec<Vec<f64>> {
        self.prob.chunks(self.n).map(|r| r.to_vec()).collect()
    }
}

/// Builds the transition matrix at `speed` by spreading each cell's per-UE
/// outflow uniformly over its actual neighbours. Per-UE rates are capped at
/// one so every row sums to at most one.
pub fn build_mobility(
    config: &NetworkConfig,
    speed: f64,
    adjacency: &Adjacency,
) -> Result<MobilityModel> {
    let [lo, hi] = config.speed_range;
    if !(speed.is_finite() && speed >= 0.0) {
        return Err(Error::config("speed", format!("must be >= 0, got {speed}")));
    }
    if speed < lo || speed > hi {
        return Err(Error::config(
            "speed",
            format!("{speed} m/s outside configured range [{lo}, {hi}]"),
        ));
    }
    let n = adjacency.num_cells();
    if n != config.num_cells {
        return Err(Error::config(
            "num_cells",
            format!("adjacency has {n} cells, config has {}", config.num_cells),
        ));
    }
    let per_user = per_user_crossing_rate(config, speed).min(1.0);
    let mut prob = vec![vec![0.0; n]; n];
    for (k, row) in prob.iter_mut().enumerate() {
        let deg = adjacency.degree(k);
        if deg == 0 {
            if speed > 0.0 {
                return Err(Error::config(
                    "grid_rows",
                    format!("cell {k} has no neighbours but speed is {speed}"),
                ));
            }
            continue;
        }
        let rate = per_user / deg as f64;
        for &m in adjacency.neighbors(k) {
            row[m] = rate;
        }
    }
    MobilityModel::from_matrix(prob, adjacency.clone())
}
