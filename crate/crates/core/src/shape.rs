//! Diagrams, partitions and skew shapes: Rothe diagrams, skew-vexillary
//! matching, balanced-shape geometry and rook-placement coefficients.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use num_integer::Integer;
use thiserror::Error;

use crate::perm::{Permutation, Side};

/// A box `(row, col)` in matrix coordinates, 1-based.
pub type Cell = (u32, u32);

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ShapeError {
    #[error("not a partition: {0:?}")]
    NotAPartition(Vec<u32>),
    #[error("inner partition is not contained in the outer one")]
    InnerNotContained,
    #[error("shape is not connected")]
    DisconnectedShape,
    #[error("box {0:?} is not in the diagram")]
    BoxNotInDiagram(Cell),
    #[error("shape is not balanced")]
    NotBalanced,
    #[error("cannot parse shape from {0:?}")]
    Parse(String),
    #[error("rook placement check failed: {0}")]
    CoefficientViolation(&'static str),
}

/// Weakly decreasing positive parts.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Partition(Vec<u32>);

impl Partition {
    /// Trailing zeros are dropped; anything else out of order is rejected.
    pub fn new(mut parts: Vec<u32>) -> Result<Self, ShapeError> {
        while parts.last() == Some(&0) {
            parts.pop();
        }
        if parts.windows(2).any(|w| w[0] < w[1]) || parts.contains(&0) {
            return Err(ShapeError::NotAPartition(parts));
        }
        Ok(Partition(parts))
    }

    pub fn empty() -> Self {
        Partition(Vec::new())
    }

    /// `bᵃ`.
    pub fn rectangle(a: u32, b: u32) -> Self {
        if b == 0 {
            return Partition::empty();
        }
        Partition(alloc::vec![b; a as usize])
    }

    /// `δ_d = (d−1, d−2, …, 1)`.
    pub fn staircase(d: u32) -> Self {
        Partition((1..d).rev().collect())
    }

    pub fn parts(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn size(&self) -> u32 {
        self.0.iter().sum()
    }

    /// Part `i` (1-based), zero past the end.
    pub fn part(&self, i: usize) -> u32 {
        if i == 0 {
            return u32::MAX;
        }
        self.0.get(i - 1).copied().unwrap_or(0)
    }

    pub fn conjugate(&self) -> Self {
        let width = self.0.first().copied().unwrap_or(0);
        Partition((1..=width).map(|c| self.0.iter().filter(|&&p| p >= c).count() as u32).collect())
    }

    pub fn contains(&self, other: &Partition) -> bool {
        other.len() <= self.len() && other.0.iter().zip(&self.0).all(|(o, s)| o <= s)
    }

    /// All partitions `κ` with `inner ⊆ κ ⊆ outer`.
    pub fn between(inner: &Partition, outer: &Partition) -> Vec<Partition> {
        let rows = outer.len();
        let mut out = Vec::new();
        let mut cur = alloc::vec![0u32; rows];
        fn rec(i: usize, inner: &Partition, outer: &Partition, cur: &mut Vec<u32>, out: &mut Vec<Partition>) {
            if i == cur.len() {
                out.push(Partition::new(cur.clone()).unwrap());
                return;
            }
            let hi = if i == 0 { outer.part(1) } else { cur[i - 1].min(outer.part(i + 1)) };
            let lo = inner.part(i + 1);
            for v in lo..=hi {
                cur[i] = v;
                rec(i + 1, inner, outer, cur, out);
            }
        }
        rec(0, inner, outer, &mut cur, &mut out);
        out
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("0");
        }
        for (k, p) in self.0.iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{}", p)?;
        }
        Ok(())
    }
}

impl fmt::Debug for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self)
    }
}

impl FromStr for Partition {
    type Err = ShapeError;

    fn from_str(s: &str) -> Result<Self, ShapeError> {
        let s = s.trim().trim_start_matches('(').trim_end_matches(')');
        if s.is_empty() || s == "0" || s == "∅" {
            return Ok(Partition::empty());
        }
        let parts = s
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|t| !t.is_empty())
            .map(|t| t.parse::<u32>().map_err(|_| ShapeError::Parse(String::from(s))))
            .collect::<Result<Vec<_>, _>>()?;
        Partition::new(parts)
    }
}

/// The skew shape `λ/ν`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SkewShape {
    outer: Partition,
    inner: Partition,
}

impl SkewShape {
    pub fn new(outer: Partition, inner: Partition) -> Result<Self, ShapeError> {
        if !outer.contains(&inner) {
            return Err(ShapeError::InnerNotContained);
        }
        Ok(SkewShape { outer, inner })
    }

    pub fn straight(outer: Partition) -> Self {
        SkewShape { outer, inner: Partition::empty() }
    }

    pub fn outer(&self) -> &Partition {
        &self.outer
    }

    pub fn inner(&self) -> &Partition {
        &self.inner
    }

    pub fn is_straight(&self) -> bool {
        self.normalized().inner.is_empty()
    }

    pub fn size(&self) -> u32 {
        self.outer.size() - self.inner.size()
    }

    pub fn diagram(&self) -> Diagram {
        let mut boxes = BTreeSet::new();
        for i in 1..=self.outer.len() {
            for j in self.inner.part(i) + 1..=self.outer.part(i) {
                boxes.insert((i as u32, j));
            }
        }
        Diagram { boxes }
    }

    /// Builds a shape from rows given as column intervals `[l, r]`, top to bottom.
    /// Both endpoint sequences must be weakly decreasing.
    fn from_rows(rows: &[(u32, u32)]) -> Self {
        let outer = Partition::new(rows.iter().map(|r| r.1).collect()).expect("right ends decrease");
        let inner = Partition::new(rows.iter().map(|r| r.0 - 1).collect()).expect("left ends decrease");
        SkewShape { outer, inner }
    }

    /// Reads a diagram as a skew shape without permuting anything. Every row
    /// from 1 to the last must be nonempty.
    pub fn from_diagram(d: &Diagram) -> Option<Self> {
        let rows = d.row_sets();
        let last = rows.keys().next_back().copied().unwrap_or(0);
        let mut intervals = Vec::new();
        for r in 1..=last {
            let cols = rows.get(&r)?;
            let l = *cols.first().unwrap();
            let h = *cols.last().unwrap();
            if (h - l + 1) as usize != cols.len() {
                return None;
            }
            if let Some(&(pl, ph)) = intervals.last() {
                if l > pl || h > ph {
                    return None;
                }
            }
            intervals.push((l, h));
        }
        Some(SkewShape::from_rows(&intervals))
    }

    /// Removes empty rows and columns.
    pub fn normalized(&self) -> SkewShape {
        if self.size() == 0 {
            return SkewShape::straight(Partition::empty());
        }
        let (d, _, _) = self.diagram().compressed();
        SkewShape::from_diagram(&d).expect("compressing a skew shape keeps it skew")
    }

    /// Height `a` and width `b` of the bounding rectangle after normalization.
    pub fn dims(&self) -> (u32, u32) {
        let d = self.diagram();
        (d.row_sets().len() as u32, d.col_sets().len() as u32)
    }

    pub fn transpose(&self) -> SkewShape {
        SkewShape { outer: self.outer.conjugate(), inner: self.inner.conjugate() }
    }

    /// 180° rotation inside the bounding rectangle of the normalized shape.
    pub fn rotate(&self) -> SkewShape {
        let n = self.normalized();
        let (a, b) = n.dims();
        let rows: Vec<(u32, u32)> =
            (1..=a as usize).rev().map(|i| (b + 1 - n.outer.part(i), b - n.inner.part(i))).collect();
        SkewShape::from_rows(&rows)
    }

    pub fn is_connected(&self) -> bool {
        connected_components(&self.diagram()).len() == 1
    }
}

impl fmt::Display for SkewShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.inner.is_empty() {
            write!(f, "{}", self.outer)
        } else {
            write!(f, "{}/{}", self.outer, self.inner)
        }
    }
}

impl fmt::Debug for SkewShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self)
    }
}

impl FromStr for SkewShape {
    type Err = ShapeError;

    /// `"3,2,2/1,1"`; the inner part is optional.
    fn from_str(s: &str) -> Result<Self, ShapeError> {
        let mut it = s.splitn(2, '/');
        let outer: Partition = it.next().unwrap_or("").parse()?;
        let inner: Partition = match it.next() {
            Some(t) => t.parse()?,
            None => Partition::empty(),
        };
        SkewShape::new(outer, inner)
    }
}

/// A finite set of boxes.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Diagram {
    boxes: BTreeSet<Cell>,
}

impl Diagram {
    pub fn new<I: IntoIterator<Item = Cell>>(boxes: I) -> Self {
        let boxes: BTreeSet<Cell> = boxes.into_iter().collect();
        debug_assert!(boxes.iter().all(|&(r, c)| r > 0 && c > 0));
        Diagram { boxes }
    }

    pub fn boxes(&self) -> &BTreeSet<Cell> {
        &self.boxes
    }

    pub fn len(&self) -> usize {
        self.boxes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.boxes.is_empty()
    }

    pub fn contains(&self, cell: Cell) -> bool {
        self.boxes.contains(&cell)
    }

    pub fn row_sets(&self) -> BTreeMap<u32, BTreeSet<u32>> {
        let mut m: BTreeMap<u32, BTreeSet<u32>> = BTreeMap::new();
        for &(r, c) in &self.boxes {
            m.entry(r).or_default().insert(c);
        }
        m
    }

    pub fn col_sets(&self) -> BTreeMap<u32, BTreeSet<u32>> {
        let mut m: BTreeMap<u32, BTreeSet<u32>> = BTreeMap::new();
        for &(r, c) in &self.boxes {
            m.entry(c).or_default().insert(r);
        }
        m
    }

    pub fn transpose(&self) -> Diagram {
        Diagram { boxes: self.boxes.iter().map(|&(r, c)| (c, r)).collect() }
    }

    /// Drops empty rows and columns; returns the old→new row and column maps.
    pub fn compressed(&self) -> (Diagram, BTreeMap<u32, u32>, BTreeMap<u32, u32>) {
        let rows: BTreeMap<u32, u32> =
            self.row_sets().keys().enumerate().map(|(k, &r)| (r, k as u32 + 1)).collect();
        let cols: BTreeMap<u32, u32> =
            self.col_sets().keys().enumerate().map(|(k, &c)| (c, k as u32 + 1)).collect();
        let boxes = self.boxes.iter().map(|&(r, c)| (rows[&r], cols[&c])).collect();
        (Diagram { boxes }, rows, cols)
    }

    pub fn permuted(&self, row_perm: &BTreeMap<u32, u32>, col_perm: &BTreeMap<u32, u32>) -> Diagram {
        Diagram { boxes: self.boxes.iter().map(|&(r, c)| (row_perm[&r], col_perm[&c])).collect() }
    }
}

impl fmt::Debug for Diagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.boxes.iter()).finish()
    }
}

/// Boxes `(i, w(j))` for `(i,j) ∈ Inv(w)`.
pub fn rothe_diagram(w: &Permutation) -> Diagram {
    Diagram::new(w.inversion_set(Side::Direct).pairs().map(|(i, j)| (i as u32, w.at(j) as u32)))
}

/// `Inv⁻¹(w)` as a diagram, pair `(i,j)` read as box `(i,j)`.
pub fn inverse_inversion_diagram(w: &Permutation) -> Diagram {
    Diagram::new(w.inversion_set(Side::Inverse).pairs().map(|(i, j)| (i as u32, j as u32)))
}

/// Components of the graph joining boxes that share a row or a column,
/// ordered by their smallest box.
pub fn connected_components(d: &Diagram) -> Vec<Diagram> {
    let cells: Vec<Cell> = d.boxes.iter().copied().collect();
    let mut parent: Vec<usize> = (0..cells.len()).collect();
    fn find(parent: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while parent[r] != r {
            r = parent[r];
        }
        let mut y = x;
        while parent[y] != r {
            let next = parent[y];
            parent[y] = r;
            y = next;
        }
        r
    }
    let mut first_in_row: BTreeMap<u32, usize> = BTreeMap::new();
    let mut first_in_col: BTreeMap<u32, usize> = BTreeMap::new();
    for (k, &(r, c)) in cells.iter().enumerate() {
        for anchor in [*first_in_row.entry(r).or_insert(k), *first_in_col.entry(c).or_insert(k)] {
            let (x, y) = (find(&mut parent, anchor), find(&mut parent, k));
            if x != y {
                parent[x.max(y)] = x.min(y);
            }
        }
    }
    let mut groups: BTreeMap<usize, Vec<Cell>> = BTreeMap::new();
    for (k, &cell) in cells.iter().enumerate() {
        let root = find(&mut parent, k);
        groups.entry(root).or_default().push(cell);
    }
    groups.into_values().map(Diagram::new).collect()
}

/// A row/column relabelling carrying a diagram onto a skew shape.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SkewMatch {
    pub shape: SkewShape,
    pub row_perm: BTreeMap<u32, u32>,
    pub col_perm: BTreeMap<u32, u32>,
}

impl SkewMatch {
    pub fn is_valid_for(&self, d: &Diagram) -> bool {
        d.boxes.iter().all(|(r, c)| self.row_perm.contains_key(r) && self.col_perm.contains_key(c))
            && d.permuted(&self.row_perm, &self.col_perm) == self.shape.diagram()
    }
}

/// Finds row and column permutations carrying `d` onto a skew shape.
///
/// Searches column orders (identical columns grouped) in which every row is an
/// interval and no row interval sits strictly inside another at both ends.
/// Sorting rows by their endpoints then yields the shape.
pub fn match_skew_shape(d: &Diagram) -> Option<SkewMatch> {
    if d.is_empty() {
        return Some(SkewMatch {
            shape: SkewShape::straight(Partition::empty()),
            row_perm: BTreeMap::new(),
            col_perm: BTreeMap::new(),
        });
    }
    let (cd, row_map, col_map) = d.compressed();
    let nrows = row_map.len();
    let ncols = col_map.len();
    assert!(nrows <= 64 && ncols <= 64, "diagram too large for the matcher");

    // Column classes: identical row sets, first appearance order.
    let mut col_rows = alloc::vec![0u64; ncols];
    for &(r, c) in cd.boxes() {
        col_rows[c as usize - 1] |= 1 << (r - 1);
    }
    let mut classes: Vec<(u64, Vec<usize>)> = Vec::new();
    for (c, &rows) in col_rows.iter().enumerate() {
        match classes.iter_mut().find(|cl| cl.0 == rows) {
            Some(cl) => cl.1.push(c),
            None => classes.push((rows, alloc::vec![c])),
        }
    }

    let mut search = IntervalSearch {
        classes: &classes,
        nrows,
        order: Vec::with_capacity(classes.len()),
        used: alloc::vec![false; classes.len()],
        start: alloc::vec![usize::MAX; nrows],
        end: alloc::vec![usize::MAX; nrows],
    };
    if !search.run() {
        return None;
    }

    // Column positions, then row intervals in column coordinates.
    let mut col_pos = alloc::vec![0u32; ncols];
    let mut class_first = Vec::with_capacity(classes.len());
    let mut class_last = Vec::with_capacity(classes.len());
    let mut pos = 0u32;
    for &cl in &search.order {
        class_first.push(pos + 1);
        for &c in &classes[cl].1 {
            pos += 1;
            col_pos[c] = pos;
        }
        class_last.push(pos);
    }
    let total = search.order.len();
    let mut rows: Vec<(usize, u32, u32)> = (0..nrows)
        .map(|r| {
            let e = if search.end[r] == usize::MAX { total - 1 } else { search.end[r] };
            (r, class_first[search.start[r]], class_last[e])
        })
        .collect();
    rows.sort_by(|x, y| y.2.cmp(&x.2).then(y.1.cmp(&x.1)).then(x.0.cmp(&y.0)));

    let intervals: Vec<(u32, u32)> = rows.iter().map(|&(_, l, h)| (l, h)).collect();
    let shape = SkewShape::from_rows(&intervals);
    let mut row_target = alloc::vec![0u32; nrows];
    for (t, &(r, _, _)) in rows.iter().enumerate() {
        row_target[r] = t as u32 + 1;
    }
    let mut m = SkewMatch {
        shape,
        row_perm: row_map.iter().map(|(&orig, &k)| (orig, row_target[k as usize - 1])).collect(),
        col_perm: col_map.iter().map(|(&orig, &k)| (orig, col_pos[k as usize - 1])).collect(),
    };
    let rot = m.shape.rotate();
    if rot.outer < m.shape.outer {
        let (a, b) = (nrows as u32, ncols as u32);
        m = SkewMatch {
            shape: rot,
            row_perm: m.row_perm.iter().map(|(&k, &v)| (k, a + 1 - v)).collect(),
            col_perm: m.col_perm.iter().map(|(&k, &v)| (k, b + 1 - v)).collect(),
        };
    }
    debug_assert!(m.is_valid_for(d));
    Some(m)
}

struct IntervalSearch<'a> {
    classes: &'a [(u64, Vec<usize>)],
    nrows: usize,
    order: Vec<usize>,
    used: Vec<bool>,
    start: Vec<usize>,
    end: Vec<usize>,
}

impl IntervalSearch<'_> {
    fn run(&mut self) -> bool {
        let pos = self.order.len();
        if pos == self.classes.len() {
            return true;
        }
        for cl in 0..self.classes.len() {
            if self.used[cl] {
                continue;
            }
            let rows = self.classes[cl].0;
            let saved_start = self.start.clone();
            let saved_end = self.end.clone();
            if self.place(rows, pos) {
                self.used[cl] = true;
                self.order.push(cl);
                if self.run() {
                    return true;
                }
                self.order.pop();
                self.used[cl] = false;
            }
            self.start = saved_start;
            self.end = saved_end;
        }
        false
    }

    /// Places a column class at position `pos`; false on a broken interval or
    /// a strictly nested pair.
    fn place(&mut self, rows: u64, pos: usize) -> bool {
        let mut closing = Vec::new();
        for r in 0..self.nrows {
            let here = rows >> r & 1 == 1;
            let started = self.start[r] != usize::MAX;
            let closed = self.end[r] != usize::MAX;
            if here {
                if closed {
                    return false;
                }
                if !started {
                    self.start[r] = pos;
                }
            } else if started && !closed {
                self.end[r] = pos - 1;
                closing.push(r);
            }
        }
        for &r in &closing {
            for s in 0..self.nrows {
                let open = self.start[s] != usize::MAX && self.end[s] == usize::MAX;
                if open && self.start[s] < self.start[r] {
                    return false;
                }
            }
        }
        true
    }
}

/// The skew shape of `w`'s Rothe diagram, if `w` is skew vexillary.
pub fn skew_vexillary_shape(w: &Permutation) -> Option<SkewShape> {
    match_skew_shape(&rothe_diagram(w)).map(|m| m.shape)
}

/// Class counts over `Sₙ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct CensusCounts {
    pub n: usize,
    pub total: u64,
    pub skew_vexillary: u64,
    pub vexillary: u64,
    pub dominant: u64,
    pub grassmannian: u64,
    pub inverse_grassmannian: u64,
    pub fully_commutative: u64,
    /// Skew vexillary of a connected balanced shape.
    pub balanced: u64,
}

impl CensusCounts {
    pub fn add(&mut self, w: &Permutation) {
        let c = w.classify();
        self.total += 1;
        self.vexillary += c.vexillary as u64;
        self.dominant += c.dominant as u64;
        self.grassmannian += c.grassmannian as u64;
        self.inverse_grassmannian += c.inverse_grassmannian as u64;
        self.fully_commutative += c.fully_commutative as u64;
        if let Some(sigma) = skew_vexillary_shape(w) {
            self.skew_vexillary += 1;
            if is_balanced(&sigma) == Ok(true) {
                self.balanced += 1;
            }
        }
    }

    pub fn merge(mut self, other: CensusCounts) -> CensusCounts {
        self.total += other.total;
        self.skew_vexillary += other.skew_vexillary;
        self.vexillary += other.vexillary;
        self.dominant += other.dominant;
        self.grassmannian += other.grassmannian;
        self.inverse_grassmannian += other.inverse_grassmannian;
        self.fully_commutative += other.fully_commutative;
        self.balanced += other.balanced;
        self
    }
}

/// Sequential census of `Sₙ`.
pub fn census(n: usize) -> CensusCounts {
    let mut counts = CensusCounts { n, ..Default::default() };
    for w in Permutation::all(n) {
        counts.add(&w);
    }
    counts
}

fn occupied(sigma: &SkewShape, i: i64, j: i64) -> bool {
    i >= 1 && j >= 1 && (sigma.inner.part(i as usize) as i64) < j && j <= sigma.outer.part(i as usize) as i64
}

/// Outward corners of a connected shape as grid points `(r, c)`, with box
/// `(i,j)` occupying `[i−1,i]×[j−1,j]` in its bounding rectangle.
pub fn outward_corners(sigma: &SkewShape) -> Result<Vec<(u32, u32)>, ShapeError> {
    let s = sigma.normalized();
    if !s.is_connected() {
        return Err(ShapeError::DisconnectedShape);
    }
    let (a, b) = s.dims();
    let mut out = Vec::new();
    for r in 0..=a as i64 {
        for c in 0..=b as i64 {
            // the four boxes meeting at (r, c): NW, NE, SW, SE
            let around = [(r, c), (r, c + 1), (r + 1, c), (r + 1, c + 1)];
            let count = around.iter().filter(|&&(i, j)| occupied(&s, i, j)).count();
            // Three boxes: the two boundary edges at this point belong to
            // different boxes, so no single box meets both.
            if count == 3 {
                out.push((r as u32, c as u32));
            }
        }
    }
    Ok(out)
}

/// True when every outward corner lies on the antidiagonal `b·r + a·c = a·b`.
pub fn is_balanced(sigma: &SkewShape) -> Result<bool, ShapeError> {
    let corners = outward_corners(sigma)?;
    let (a, b) = sigma.dims();
    Ok(corners.iter().all(|&(r, c)| b * r + a * c == a * b))
}

/// `σ∘bᵃ`: every box becomes an `a×b` rectangle.
pub fn blowup(sigma: &SkewShape, a: u32, b: u32) -> SkewShape {
    let grow = |p: &Partition| {
        Partition::new(p.parts().iter().flat_map(|&x| core::iter::repeat_n(x * b, a as usize)).collect()).unwrap()
    };
    SkewShape { outer: grow(&sigma.outer), inner: grow(&sigma.inner) }
}

/// Connected skew shapes filling exactly an `a×b` bounding box, normalized.
pub fn connected_shapes(a: u32, b: u32) -> Vec<SkewShape> {
    let mut out = Vec::new();
    let rows = a as usize;
    let mut lam = alloc::vec![0u32; rows];
    let mut nu = alloc::vec![0u32; rows];
    fn rec(i: usize, b: u32, lam: &mut Vec<u32>, nu: &mut Vec<u32>, out: &mut Vec<SkewShape>) {
        let rows = lam.len();
        if i == rows {
            if lam[0] == b && nu[rows - 1] == 0 {
                out.push(SkewShape::from_rows(&lam.iter().zip(nu.iter()).map(|(&l, &n)| (n + 1, l)).collect::<Vec<_>>()));
            }
            return;
        }
        let lam_hi = if i == 0 { b } else { lam[i - 1] };
        let nu_hi = if i == 0 { b - 1 } else { nu[i - 1] };
        for l in 1..=lam_hi {
            // rows i−1 and i must share a column
            if i > 0 && nu[i - 1] >= l {
                continue;
            }
            for n in 0..=nu_hi.min(l - 1) {
                lam[i] = l;
                nu[i] = n;
                rec(i + 1, b, lam, nu, out);
            }
        }
    }
    if a > 0 && b > 0 {
        rec(0, b, &mut lam, &mut nu, &mut out);
    }
    out
}

/// The balanced `m×m` shapes.
pub fn balanced_cores(m: u32) -> Vec<SkewShape> {
    connected_shapes(m, m).into_iter().filter(|s| is_balanced(s) == Ok(true)).collect()
}

/// All connected balanced shapes of height `a` and width `b`, as blow-ups of
/// the balanced `m×m` cores, `m = gcd(a,b)`.
pub fn enumerate_balanced(a: u32, b: u32) -> Vec<SkewShape> {
    let m = a.gcd(&b);
    let mut out: Vec<SkewShape> = balanced_cores(m)
        .iter()
        .map(|core| {
            let s = blowup(core, a / m, b / m);
            assert_eq!(is_balanced(&s), Ok(true), "blow-up of a balanced core must be balanced");
            s
        })
        .collect();
    out.sort();
    out
}

/// The cross-saturation of `cell` in `d`, or `None` if `cell` is not cross-saturated.
pub fn cross_saturation(d: &Diagram, cell: Cell) -> Result<Option<BTreeSet<Cell>>, ShapeError> {
    if !d.contains(cell) {
        return Err(ShapeError::BoxNotInDiagram(cell));
    }
    let (i, j) = cell;
    let row_mates: Vec<u32> = d.boxes.iter().filter(|b| b.0 == i).map(|b| b.1).collect();
    let col_mates: Vec<u32> = d.boxes.iter().filter(|b| b.1 == j).map(|b| b.0).collect();
    let mut sat = BTreeSet::new();
    for &r in &col_mates {
        for &c in &row_mates {
            if !d.contains((r, c)) {
                return Ok(None);
            }
            sat.insert((r, c));
        }
    }
    Ok(Some(sat))
}

pub fn is_cross_saturated(d: &Diagram, cell: Cell) -> bool {
    matches!(cross_saturation(d, cell), Ok(Some(_)))
}

/// Integer coefficients on the boxes of a diagram.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct RookCoefficients {
    pub coeffs: BTreeMap<Cell, i64>,
}

impl RookCoefficients {
    pub fn get(&self, cell: Cell) -> i64 {
        self.coeffs.get(&cell).copied().unwrap_or(0)
    }

    pub fn total(&self) -> i64 {
        self.coeffs.values().sum()
    }

    pub fn row_sum(&self, r: u32) -> i64 {
        self.coeffs.iter().filter(|(c, _)| c.0 == r).map(|(_, v)| v).sum()
    }

    pub fn col_sum(&self, c: u32) -> i64 {
        self.coeffs.iter().filter(|(k, _)| k.1 == c).map(|(_, v)| v).sum()
    }

    pub fn nonzero(&self) -> impl Iterator<Item = (Cell, i64)> + '_ {
        self.coeffs.iter().filter(|(_, &v)| v != 0).map(|(&k, &v)| (k, v))
    }

    /// Checks the three placement conditions on diagram `d`: support on
    /// cross-saturated boxes, rows summing to `row_total`, columns to `col_total`.
    pub fn check(&self, d: &Diagram, row_total: i64, col_total: i64) -> Result<(), ShapeError> {
        for (cell, _) in self.nonzero() {
            if !d.contains(cell) || !is_cross_saturated(d, cell) {
                return Err(ShapeError::CoefficientViolation("coefficient on a box that is not cross-saturated"));
            }
        }
        for &r in d.row_sets().keys() {
            if self.row_sum(r) != row_total {
                return Err(ShapeError::CoefficientViolation("row sum"));
            }
        }
        for &c in d.col_sets().keys() {
            if self.col_sum(c) != col_total {
                return Err(ShapeError::CoefficientViolation("column sum"));
            }
        }
        let (a, b) = (d.row_sets().len() as i64, d.col_sets().len() as i64);
        if self.total() != a * row_total || self.total() != b * col_total {
            return Err(ShapeError::CoefficientViolation("total"));
        }
        Ok(())
    }
}

/// Coefficients for a balanced shape of height `a`, width `b`: in each diagonal
/// `a′×b′` block, `a` on the bottom row, `b` on the right column and
/// `a+b−ab/m` at their common corner.
pub fn balanced_rook_coefficients(sigma: &SkewShape) -> Result<RookCoefficients, ShapeError> {
    let s = sigma.normalized();
    if !is_balanced(&s)? {
        return Err(ShapeError::NotBalanced);
    }
    let (a, b) = s.dims();
    let m = a.gcd(&b);
    let (ap, bp) = (a / m, b / m);
    let (ai, bi) = (a as i64, b as i64);
    let corner = ai + bi - ai * bi / m as i64;
    let d = s.diagram();
    let mut coeffs: BTreeMap<Cell, i64> = d.boxes.iter().map(|&c| (c, 0)).collect();
    for t in 1..=m {
        let bottom = (m - t + 1) * ap;
        let right = t * bp;
        for r in bottom + 1 - ap..=bottom {
            for c in right + 1 - bp..=right {
                let v = match (r == bottom, c == right) {
                    (true, true) => corner,
                    (true, false) => ai,
                    (false, true) => bi,
                    (false, false) => 0,
                };
                match coeffs.get_mut(&(r, c)) {
                    Some(slot) => *slot = v,
                    None => return Err(ShapeError::CoefficientViolation("diagonal block leaves the shape")),
                }
            }
        }
    }
    let rc = RookCoefficients { coeffs };
    rc.check(&d, bi, ai)?;
    Ok(rc)
}

/// Pulls shape coefficients back along a match onto the source diagram.
pub fn transport(coeffs: &RookCoefficients, m: &SkewMatch, source: &Diagram) -> RookCoefficients {
    RookCoefficients {
        coeffs: source.boxes.iter().map(|&(r, c)| ((r, c), coeffs.get((m.row_perm[&r], m.col_perm[&c])))).collect(),
    }
}

/// Rook coefficients on `Inv⁻¹(w)` for `w` skew vexillary of a connected
/// balanced shape. Returns the matched shape (that of `Inv⁻¹(w)`, the
/// transpose of the Rothe shape up to rotation) and the coefficients.
pub fn inverse_inversion_coefficients(w: &Permutation) -> Result<(SkewMatch, RookCoefficients), ShapeError> {
    let d = inverse_inversion_diagram(w);
    let m = match_skew_shape(&d).ok_or(ShapeError::NotBalanced)?;
    let base = balanced_rook_coefficients(&m.shape)?;
    let (ta, tb) = m.shape.dims();
    let rc = transport(&base, &m, &d);
    rc.check(&d, tb as i64, ta as i64)?;
    Ok((m, rc))
}
