//! Hierarchical dyadic meshes.
//!
//! `Omega^0` is the whole domain and each `Omega^l`, `l >= 1`, is a union of
//! level-`(l-1)` cells. A level-`l` cell is stored as subdivided when its
//! region belongs to `Omega^{l+1}`; the active cells of level `l` are those in
//! `Omega^l` that are not subdivided. Cells are addressed as `(level, i, j)`
//! and the dyadic children of `(l, i, j)` are `(l+1, 2i+a, 2j+b)`.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use crate::error::{QiError, QiResult};
use crate::grid::{IndexBox, Rect, UniformGrid};
use crate::scalar::Scalar;

/// A cell `(level, i, j)`; `i` runs along x. Ordering is lexicographic.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Cell {
    pub level: usize,
    pub i: i64,
    pub j: i64,
}

impl Cell {
    pub fn new(level: usize, i: i64, j: i64) -> Self {
        Self { level, i, j }
    }

    pub fn parent(&self) -> Option<Cell> {
        (self.level > 0).then(|| Cell::new(self.level - 1, self.i.div_euclid(2), self.j.div_euclid(2)))
    }

    pub fn children(&self) -> [Cell; 4] {
        let (l, i, j) = (self.level + 1, 2 * self.i, 2 * self.j);
        [Cell::new(l, i, j), Cell::new(l, i + 1, j), Cell::new(l, i, j + 1), Cell::new(l, i + 1, j + 1)]
    }

    /// Ancestor (or self) at a coarser or equal level.
    pub fn ancestor(&self, level: usize) -> Cell {
        let s = self.level - level;
        Cell::new(level, self.i >> s, self.j >> s)
    }
}

/// Per-level boolean cell map with a summed-area table for box counts.
#[derive(Debug, Clone, PartialEq)]
struct CellMap {
    nx: usize,
    ny: usize,
    bits: Vec<bool>,
    sums: Vec<u32>,
}

impl CellMap {
    fn new(nx: usize, ny: usize, bits: Vec<bool>) -> Self {
        let mut sums = vec![0u32; (nx + 1) * (ny + 1)];
        for j in 0..ny {
            for i in 0..nx {
                let v = bits[j * nx + i] as u32;
                sums[(j + 1) * (nx + 1) + i + 1] =
                    v + sums[j * (nx + 1) + i + 1] + sums[(j + 1) * (nx + 1) + i] - sums[j * (nx + 1) + i];
            }
        }
        Self { nx, ny, bits, sums }
    }

    fn get(&self, i: i64, j: i64) -> bool {
        i >= 0 && j >= 0 && (i as usize) < self.nx && (j as usize) < self.ny && self.bits[j as usize * self.nx + i as usize]
    }

    /// Count of set cells in the box (already clipped to the map).
    fn count(&self, b: &IndexBox) -> usize {
        if b.is_empty() {
            return 0;
        }
        let w = self.nx + 1;
        let (i0, i1, j0, j1) = (b.i0 as usize, b.i1 as usize + 1, b.j0 as usize, b.j1 as usize + 1);
        (self.sums[j1 * w + i1] + self.sums[j0 * w + i0] - self.sums[j0 * w + i1] - self.sums[j1 * w + i0]) as usize
    }
}

/// A hierarchy of nested dyadic domains over a uniform base grid.
#[derive(Debug, Clone, PartialEq)]
pub struct HierarchicalMesh<T> {
    base: UniformGrid<T>,
    /// `refined[l]`: level-`l` cells contained in `Omega^{l+1}`, `l < M`.
    refined: Vec<CellMap>,
    /// `inside[l]`: level-`l` cells contained in `Omega^l`.
    inside: Vec<CellMap>,
}

impl<T: Scalar> HierarchicalMesh<T> {
    /// Single-level mesh: `M = 1`, `Omega^0 = Omega`.
    pub fn uniform(domain: Rect<T>, n1: usize, n2: usize) -> QiResult<Self> {
        let base = UniformGrid::new(domain, n1, n2, 0)?;
        Self::from_subdivided(base, vec![Vec::new()])
    }

    /// Builds a mesh from the domains `Omega^1 .. Omega^{M-1}`; `omegas[l - 1]`
    /// lists the level-`(l-1)` cells `(i, j)` whose union is `Omega^l`.
    pub fn from_domains(base: UniformGrid<T>, omegas: &[Vec<(i64, i64)>]) -> QiResult<Self> {
        let mut sub: Vec<Vec<(i64, i64)>> = omegas.to_vec();
        sub.push(Vec::new());
        Self::from_subdivided(base.at_level(0), sub)
    }

    fn from_subdivided(base: UniformGrid<T>, mut subdivided: Vec<Vec<(i64, i64)>>) -> QiResult<Self> {
        while subdivided.len() > 1 && subdivided[subdivided.len() - 2].is_empty() {
            subdivided.pop();
        }
        if subdivided.last().is_none_or(|v| !v.is_empty()) {
            subdivided.push(Vec::new());
        }
        let depth = subdivided.len();
        let mut refined = Vec::with_capacity(depth);
        let mut inside = Vec::with_capacity(depth);
        for (level, cells) in subdivided.iter().enumerate() {
            let g = base.at_level(level);
            let (nx, ny) = (g.n1(), g.n2());
            let in_bits: Vec<bool> = if level == 0 {
                vec![true; nx * ny]
            } else {
                let parent: &CellMap = &refined[level - 1];
                (0..ny as i64)
                    .flat_map(|j| (0..nx as i64).map(move |i| (i, j)))
                    .map(|(i, j)| parent.get(i >> 1, j >> 1))
                    .collect()
            };
            let in_map = CellMap::new(nx, ny, in_bits);
            let mut bits = vec![false; nx * ny];
            for &(i, j) in cells {
                if i < 0 || j < 0 || i as usize >= nx || j as usize >= ny {
                    return Err(QiError::InvalidMesh(format!("cell ({i}, {j}) outside level {level} grid")));
                }
                if !in_map.get(i, j) {
                    return Err(QiError::InvalidMesh(format!(
                        "cell ({i}, {j}) of level {level} is not inside Omega^{level}"
                    )));
                }
                bits[j as usize * nx + i as usize] = true;
            }
            refined.push(CellMap::new(nx, ny, bits));
            inside.push(in_map);
        }
        Ok(Self { base, refined, inside })
    }

    /// Number of levels `M`.
    pub fn depth(&self) -> usize {
        self.refined.len()
    }

    pub fn base(&self) -> &UniformGrid<T> {
        &self.base
    }

    pub fn domain(&self) -> Rect<T> {
        self.base.domain
    }

    pub fn grid(&self, level: usize) -> UniformGrid<T> {
        self.base.at_level(level)
    }

    /// Level-`l` cell inside `Omega^l`.
    pub fn in_domain(&self, level: usize, i: i64, j: i64) -> bool {
        level < self.depth() && self.inside[level].get(i, j)
    }

    /// Level-`l` cell inside `Omega^{l+1}`.
    pub fn is_refined(&self, level: usize, i: i64, j: i64) -> bool {
        level < self.depth() && self.refined[level].get(i, j)
    }

    pub fn is_active(&self, c: Cell) -> bool {
        self.in_domain(c.level, c.i, c.j) && !self.is_refined(c.level, c.i, c.j)
    }

    fn clip(&self, level: usize, b: &IndexBox) -> IndexBox {
        let g = self.grid(level);
        b.intersect(&IndexBox::new(0, g.n1() as i64 - 1, 0, g.n2() as i64 - 1))
    }

    /// Every level-`l` cell of the box (clipped to the domain) lies in `Omega^l`.
    pub fn box_in_domain(&self, level: usize, cells: &IndexBox) -> bool {
        if level >= self.depth() {
            return false;
        }
        let b = self.clip(level, cells);
        !b.is_empty() && self.inside[level].count(&b) == b.len()
    }

    /// Every level-`l` cell of the box (clipped to the domain) lies in `Omega^{l+1}`.
    pub fn box_refined(&self, level: usize, cells: &IndexBox) -> bool {
        if level >= self.depth() {
            return false;
        }
        let b = self.clip(level, cells);
        !b.is_empty() && self.refined[level].count(&b) == b.len()
    }

    /// Active cells `G^l` of one level in row-major order (`j` outer).
    pub fn active_cells(&self, level: usize) -> Vec<Cell> {
        if level >= self.depth() {
            return Vec::new();
        }
        let g = self.grid(level);
        let mut out = Vec::new();
        for j in 0..g.n2() as i64 {
            for i in 0..g.n1() as i64 {
                let c = Cell::new(level, i, j);
                if self.is_active(c) {
                    out.push(c);
                }
            }
        }
        out
    }

    /// All active cells, level by level.
    pub fn all_active_cells(&self) -> Vec<Cell> {
        (0..self.depth()).flat_map(|l| self.active_cells(l)).collect()
    }

    pub fn cell_rect(&self, c: Cell) -> Rect<T> {
        self.grid(c.level).cell_rect(c.i, c.j)
    }

    /// Level-`(l-1)` cells whose union is `Omega^l`, for `l >= 1`.
    pub fn omega_cells(&self, level: usize) -> Vec<(i64, i64)> {
        if level == 0 || level >= self.depth() {
            return Vec::new();
        }
        let m = &self.refined[level - 1];
        let mut out = Vec::new();
        for j in 0..m.ny as i64 {
            for i in 0..m.nx as i64 {
                if m.get(i, j) {
                    out.push((i, j));
                }
            }
        }
        out
    }

    /// The active cell containing a point (half-open cells, closed at the
    /// domain's upper boundary).
    pub fn locate(&self, x: T, y: T) -> Cell {
        let g0 = self.grid(0);
        let (mut i, _) = g0.locate_x(x);
        let (mut j, _) = g0.locate_y(y);
        let mut level = 0;
        while self.is_refined(level, i, j) {
            level += 1;
            let g = self.grid(level);
            let (ci, _) = g.locate_x(x);
            let (cj, _) = g.locate_y(y);
            // stay within the children of the current cell
            i = ci.clamp(2 * i, 2 * i + 1);
            j = cj.clamp(2 * j, 2 * j + 1);
        }
        Cell::new(level, i, j)
    }

    /// Local coordinates of a point inside a cell.
    pub fn local_coords(&self, c: Cell, x: T, y: T) -> (T, T) {
        let g = self.grid(c.level);
        ((x - g.x(c.i)) / g.hx(), (y - g.y(c.j)) / g.hy())
    }

    /// A new mesh where the given active cells are split dyadically.
    pub fn split(&self, cells: &BTreeSet<Cell>) -> QiResult<Self> {
        let mut sub: Vec<Vec<(i64, i64)>> =
            (0..self.depth()).map(|l| self.omega_cells(l + 1)).collect();
        for c in cells {
            if !self.is_active(*c) {
                return Err(QiError::InvalidMesh(format!("cell {c:?} is not active")));
            }
            if c.level >= sub.len() {
                sub.resize(c.level + 1, Vec::new());
            }
            sub[c.level].push((c.i, c.j));
        }
        Self::from_subdivided(self.base, sub)
    }

    /// Serializes the mesh in the line-oriented text format:
    ///
    /// ```text
    /// hmesh 1
    /// domain <x0> <x1> <y0> <y1>
    /// base <N1> <N2>
    /// levels <M>
    /// level <l> <count> <i>,<j> <i>,<j> ...
    /// ```
    ///
    /// with one `level` record per `l = 1 .. M-1` listing the level-`(l-1)`
    /// cells that make up `Omega^l`.
    pub fn to_text(&self) -> String {
        let d = self.domain();
        let mut s = String::new();
        let _ = writeln!(s, "hmesh 1");
        let _ = writeln!(s, "domain {:?} {:?} {:?} {:?}", d.x0.as_f64(), d.x1.as_f64(), d.y0.as_f64(), d.y1.as_f64());
        let _ = writeln!(s, "base {} {}", self.base.base_n1, self.base.base_n2);
        let _ = writeln!(s, "levels {}", self.depth());
        for l in 1..self.depth() {
            let cells = self.omega_cells(l);
            let _ = write!(s, "level {l} {}", cells.len());
            for (i, j) in cells {
                let _ = write!(s, " {i},{j}");
            }
            s.push('\n');
        }
        s
    }

    pub fn from_text(text: &str) -> QiResult<Self> {
        let perr = |line: usize, message: String| QiError::Parse { line, message };
        let mut domain = None;
        let mut base = None;
        let mut levels = None;
        let mut omegas: Vec<Vec<(i64, i64)>> = Vec::new();
        let mut seen_header = false;
        for (ln, raw) in text.lines().enumerate() {
            let ln = ln + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut tok = line.split_whitespace();
            let key = tok.next().unwrap_or_default();
            let rest: Vec<&str> = tok.collect();
            let num = |s: &str| s.parse::<f64>().map_err(|e| perr(ln, format!("bad number `{s}`: {e}")));
            let int = |s: &str| s.parse::<i64>().map_err(|e| perr(ln, format!("bad integer `{s}`: {e}")));
            match key {
                "hmesh" => {
                    if rest != ["1"] {
                        return Err(perr(ln, "unsupported format version".into()));
                    }
                    seen_header = true;
                }
                "domain" => {
                    if rest.len() != 4 {
                        return Err(perr(ln, "domain needs 4 numbers".into()));
                    }
                    let v: Vec<f64> = rest.iter().map(|s| num(s)).collect::<QiResult<_>>()?;
                    domain = Some(Rect::new(T::lit(v[0]), T::lit(v[1]), T::lit(v[2]), T::lit(v[3])));
                }
                "base" => {
                    if rest.len() != 2 {
                        return Err(perr(ln, "base needs 2 integers".into()));
                    }
                    base = Some((int(rest[0])? as usize, int(rest[1])? as usize));
                }
                "levels" => {
                    levels = Some(int(rest.first().copied().unwrap_or(""))? as usize);
                }
                "level" => {
                    if rest.len() < 2 {
                        return Err(perr(ln, "level record needs a number and a count".into()));
                    }
                    let l = int(rest[0])? as usize;
                    let count = int(rest[1])? as usize;
                    if l != omegas.len() + 1 {
                        return Err(perr(ln, format!("expected level {}, found {l}", omegas.len() + 1)));
                    }
                    let cells: Vec<(i64, i64)> = rest[2..]
                        .iter()
                        .map(|p| {
                            let (a, b) = p.split_once(',').ok_or_else(|| perr(ln, format!("bad cell `{p}`")))?;
                            Ok((int(a)?, int(b)?))
                        })
                        .collect::<QiResult<_>>()?;
                    if cells.len() != count {
                        return Err(perr(ln, format!("declared {count} cells, found {}", cells.len())));
                    }
                    omegas.push(cells);
                }
                other => return Err(perr(ln, format!("unknown record `{other}`"))),
            }
        }
        if !seen_header {
            return Err(perr(1, "missing `hmesh 1` header".into()));
        }
        let domain = domain.ok_or_else(|| perr(0, "missing domain record".into()))?;
        let (n1, n2) = base.ok_or_else(|| perr(0, "missing base record".into()))?;
        if let Some(m) = levels {
            if m != omegas.len() + 1 {
                return Err(perr(0, format!("levels {m} but {} level records", omegas.len())));
            }
        }
        let grid = UniformGrid::new(domain, n1, n2, 0)?;
        Self::from_domains(grid, &omegas)
    }
}
