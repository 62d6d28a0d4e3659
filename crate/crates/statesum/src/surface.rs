//! Triangulated (possibly degenerate) surfaces with semi-orientations.
//!
//! Triangle `t` has corners `0, 1, 2` in cyclic order; side `i` joins corners
//! `i` and `i + 1`. Half-edge `3t + i` is side `i` of `t`. A gluing identifies
//! two half-edges and carries a flag: `same` (orientations agree across the
//! edge, weight `B`) or opposite (weight `S`). Corners along a glued side are
//! matched reversed when `same == (o1 == o2)` and in parallel otherwise.

use std::fmt;

use crate::error::{Error, Result};

/// Side of a triangle.
pub type HalfEdge = (usize, usize);

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Gluing {
    pub first: HalfEdge,
    pub second: HalfEdge,
    pub same: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Triangulation {
    positive: Vec<bool>,
    partner: Vec<Option<(usize, bool)>>,
}

/// Where a Pachner move acts.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PachnerSite {
    /// Interior edge given by one of its half-edges (2-2 move).
    Edge(HalfEdge),
    /// Triangle to subdivide (1-3 move).
    Triangle(usize),
    /// Degree-three interior vertex given by one of its corners (3-1 move).
    Vertex { triangle: usize, corner: usize },
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind((0..n).collect())
    }
    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.0[r] != r {
            r = self.0[r];
        }
        let mut y = x;
        while self.0[y] != r {
            let next = self.0[y];
            self.0[y] = r;
            y = next;
        }
        r
    }
    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.0[ra.max(rb)] = ra.min(rb);
        }
    }
}

impl Triangulation {
    /// `positive[t]` is the orientation flag of triangle `t`.
    pub fn new(positive: Vec<bool>, gluings: &[Gluing]) -> Result<Self> {
        let mut partner = vec![None; 3 * positive.len()];
        for g in gluings {
            for &(t, s) in &[g.first, g.second] {
                if t >= positive.len() || s > 2 {
                    return Err(Error::invalid(format!("half-edge ({t},{s}) does not exist")));
                }
            }
            let (h1, h2) = (3 * g.first.0 + g.first.1, 3 * g.second.0 + g.second.1);
            if h1 == h2 {
                return Err(Error::invalid(format!("half-edge {:?} glued to itself", g.first)));
            }
            for h in [h1, h2] {
                if partner[h].is_some() {
                    return Err(Error::invalid(format!("half-edge ({},{}) glued twice", h / 3, h % 3)));
                }
            }
            partner[h1] = Some((h2, g.same));
            partner[h2] = Some((h1, g.same));
        }
        Ok(Triangulation { positive, partner })
    }

    pub fn triangle_count(&self) -> usize {
        self.positive.len()
    }

    pub fn is_positive(&self, t: usize) -> bool {
        self.positive[t]
    }

    /// Partner of a half-edge and the gluing flag.
    pub fn partner(&self, h: HalfEdge) -> Option<(HalfEdge, bool)> {
        self.partner[3 * h.0 + h.1].map(|(p, s)| ((p / 3, p % 3), s))
    }

    /// Each gluing once, with `first < second` in half-edge order.
    pub fn gluings(&self) -> Vec<Gluing> {
        let mut out = Vec::new();
        for (h, p) in self.partner.iter().enumerate() {
            if let Some((q, same)) = *p {
                if h < q {
                    out.push(Gluing { first: (h / 3, h % 3), second: (q / 3, q % 3), same });
                }
            }
        }
        out
    }

    /// Unglued half-edges in increasing order.
    pub fn boundary(&self) -> Vec<HalfEdge> {
        (0..self.partner.len()).filter(|&h| self.partner[h].is_none()).map(|h| (h / 3, h % 3)).collect()
    }

    pub fn is_closed(&self) -> bool {
        self.partner.iter().all(|p| p.is_some())
    }

    /// Whether the corners along a glued side pair up in reversed order.
    pub fn reversed_matching(&self, h: HalfEdge) -> Option<bool> {
        let ((t2, _), same) = self.partner(h)?;
        Some(same == (self.positive[h.0] == self.positive[t2]))
    }

    /// Vertex class of every corner `3t + c`, labelled `0..count`.
    pub fn corner_classes(&self) -> (Vec<usize>, usize) {
        let n = self.partner.len();
        let mut uf = UnionFind::new(n);
        for g in self.gluings() {
            let (t1, s1) = g.first;
            let (t2, s2) = g.second;
            let a = [3 * t1 + s1, 3 * t1 + (s1 + 1) % 3];
            let b = [3 * t2 + s2, 3 * t2 + (s2 + 1) % 3];
            if self.reversed_matching(g.first).expect("glued") {
                uf.union(a[0], b[1]);
                uf.union(a[1], b[0]);
            } else {
                uf.union(a[0], b[0]);
                uf.union(a[1], b[1]);
            }
        }
        let mut labels = vec![usize::MAX; n];
        let mut roots = Vec::new();
        for c in 0..n {
            let r = uf.find(c);
            let id = match roots.iter().position(|&x| x == r) {
                Some(i) => i,
                None => {
                    roots.push(r);
                    roots.len() - 1
                }
            };
            labels[c] = id;
        }
        (labels, roots.len())
    }

    /// Vertex classes that do not touch the boundary.
    pub fn count_vertices(&self) -> usize {
        let (labels, count) = self.corner_classes();
        let mut on_boundary = vec![false; count];
        for (t, s) in self.boundary() {
            on_boundary[labels[3 * t + s]] = true;
            on_boundary[labels[3 * t + (s + 1) % 3]] = true;
        }
        on_boundary.iter().filter(|b| !**b).count()
    }

    pub fn count_all_vertices(&self) -> usize {
        self.corner_classes().1
    }

    pub fn count_edges(&self) -> usize {
        self.gluings().len() + self.boundary().len()
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.count_all_vertices() as i64 - self.count_edges() as i64 + self.triangle_count() as i64
    }

    /// Number of opposite-orientation gluings.
    pub fn opposite_count(&self) -> usize {
        self.gluings().iter().filter(|g| !g.same).count()
    }

    /// Toggle the orientation of `t` and the flag of every gluing incident to it.
    /// A gluing between two sides of `t` keeps its flag.
    pub fn flip_triangle_orientation(&self, t: usize) -> Result<Self> {
        self.check_triangle(t)?;
        let mut out = self.clone();
        out.positive[t] = !out.positive[t];
        for s in 0..3 {
            let h = 3 * t + s;
            if let Some((q, same)) = self.partner[h] {
                if q / 3 != t {
                    out.partner[h] = Some((q, !same));
                    out.partner[q] = Some((h, !same));
                }
            }
        }
        Ok(out)
    }

    fn check_triangle(&self, t: usize) -> Result<()> {
        if t < self.triangle_count() {
            Ok(())
        } else {
            Err(Error::InvalidSite(format!("triangle {t} does not exist")))
        }
    }

    /// Relabel corners of `t` as `(c0, c2, c1)` and toggle its orientation: the same
    /// oriented triangle, written the other way round.
    pub fn reverse_labels(&self, t: usize) -> Self {
        // new side 0 = old side 2, new side 1 = old side 1, new side 2 = old side 0
        let mut out = self.relabel_sides(t, [2, 1, 0]);
        out.positive[t] = !out.positive[t];
        out
    }

    /// Cyclic relabelling `(c1, c2, c0)`: new side `i` is old side `i + 1`.
    pub fn rotate(&self, t: usize) -> Self {
        self.relabel_sides(t, [1, 2, 0])
    }

    /// New side `i` of `t` is old side `map[i]`.
    fn relabel_sides(&self, t: usize, map: [usize; 3]) -> Self {
        let old = |h: usize| -> usize {
            if h / 3 == t {
                3 * t + map[h % 3]
            } else {
                h
            }
        };
        let mut inv = [0; 3];
        for (i, &m) in map.iter().enumerate() {
            inv[m] = i;
        }
        let new_of = |h: usize| -> usize {
            if h / 3 == t {
                3 * t + inv[h % 3]
            } else {
                h
            }
        };
        let mut out = self.clone();
        for h in 0..self.partner.len() {
            out.partner[h] = self.partner[old(h)].map(|(q, s)| (new_of(q), s));
        }
        out
    }

    /// Rewrites `t` as a positive triangle whose side `side` becomes side `target`.
    fn normalize(&self, t: usize, side: usize, target: usize) -> (Self, usize) {
        let (mut tri, mut s) = (self.clone(), side);
        if !tri.positive[t] {
            tri = tri.reverse_labels(t);
            s = [2, 1, 0][s];
        }
        while s != target {
            tri = tri.rotate(t);
            s = (s + 2) % 3;
        }
        (tri, s)
    }

    /// Replace triangles `old` (removed) by `new` triangles. `sides` maps each new half-edge
    /// (index into the concatenated new sides) to an old half-edge whose external gluing it
    /// inherits, or `None`; `internal` lists gluings among new half-edges.
    fn rebuild(
        &self,
        old: &[usize],
        new_positive: &[bool],
        sides: &[Option<usize>],
        internal: &[(usize, usize, bool)],
    ) -> Self {
        let keep: Vec<usize> = (0..self.triangle_count()).filter(|t| !old.contains(t)).collect();
        // New triangles reuse the removed slots in increasing order, extra ones go last.
        let mut slots: Vec<usize> = old.to_vec();
        slots.sort_unstable();
        let mut positive = self.positive.clone();
        let mut new_index = Vec::new();
        for (k, &p) in new_positive.iter().enumerate() {
            if k < slots.len() {
                positive[slots[k]] = p;
                new_index.push(slots[k]);
            } else {
                positive.push(p);
                new_index.push(positive.len() - 1);
            }
        }
        // Drop unused old slots (when fewer new triangles) and compact indices.
        let used: Vec<usize> = keep.iter().copied().chain(new_index.iter().copied()).collect();
        let mut order: Vec<usize> = used.clone();
        order.sort_unstable();
        let remap_t = |t: usize| order.iter().position(|&x| x == t).expect("used triangle");
        let new_he = |k: usize| 3 * remap_t(new_index[k / 3]) + k % 3;
        let mut inherit = std::collections::HashMap::new();
        for (k, s) in sides.iter().enumerate() {
            if let Some(h) = s {
                inherit.insert(*h, k);
            }
        }
        let total = order.len();
        let mut partner = vec![None; 3 * total];
        let mut pos2 = vec![true; total];
        for &t in &order {
            pos2[remap_t(t)] = positive[t];
        }
        for &t in &keep {
            for s in 0..3 {
                let h = 3 * t + s;
                if let Some((q, same)) = self.partner[h] {
                    let target = match inherit.get(&q) {
                        Some(&k) => new_he(k),
                        None => 3 * remap_t(q / 3) + q % 3,
                    };
                    partner[3 * remap_t(t) + s] = Some((target, same));
                }
            }
        }
        for (k, s) in sides.iter().enumerate() {
            let Some(h) = s else { continue };
            if let Some((q, same)) = self.partner[*h] {
                let target = match inherit.get(&q) {
                    Some(&k2) => new_he(k2),
                    None => 3 * remap_t(q / 3) + q % 3,
                };
                partner[new_he(k)] = Some((target, same));
            }
        }
        for &(a, b, same) in internal {
            partner[new_he(a)] = Some((new_he(b), same));
            partner[new_he(b)] = Some((new_he(a), same));
        }
        Triangulation { positive: pos2, partner }
    }

    /// 1-3 move: triangle `(c0, c1, c2)` becomes `(c_i, c_{i+1}, v)` for `i = 0, 1, 2`.
    pub fn pachner_13(&self, t: usize) -> Result<Self> {
        self.check_triangle(t)?;
        let (n, _) = self.normalize(t, 0, 0);
        let sides = [Some(3 * t), None, None, Some(3 * t + 1), None, None, Some(3 * t + 2), None, None];
        let internal = [(1, 5, true), (4, 8, true), (7, 2, true)];
        Ok(n.rebuild(&[t], &[true, true, true], &sides, &internal))
    }

    /// 3-1 move at a degree-three interior vertex with a coherent fan.
    pub fn pachner_31(&self, triangle: usize, corner: usize) -> Result<Self> {
        self.check_triangle(triangle)?;
        if corner > 2 {
            return Err(Error::InvalidSite(format!("corner {corner} does not exist")));
        }
        let (labels, _) = self.corner_classes();
        let class = labels[3 * triangle + corner];
        let corners: Vec<usize> = (0..labels.len()).filter(|&c| labels[c] == class).collect();
        if corners.len() != 3 {
            return Err(Error::InvalidSite(format!("vertex has degree {} (need 3)", corners.len())));
        }
        let tris: Vec<usize> = corners.iter().map(|c| c / 3).collect();
        if tris[0] == tris[1] || tris[1] == tris[2] || tris[0] == tris[2] {
            return Err(Error::InvalidSite("vertex meets a triangle twice".into()));
        }
        for &c in &corners {
            let (t, k) = (c / 3, c % 3);
            for s in [k, (k + 2) % 3] {
                if self.partner[3 * t + s].is_none() {
                    return Err(Error::InvalidSite("vertex lies on the boundary".into()));
                }
            }
        }
        // Put the vertex at corner 2 of positive triangles: side 0 is then opposite to it.
        let mut n = self.clone();
        for &c in &corners {
            let (t, k) = (c / 3, c % 3);
            // the side opposite corner k is side k+1
            n = n.normalize(t, (k + 1) % 3, 0).0;
        }
        let a = *tris.iter().min().expect("three triangles");
        let next = |t: usize| -> Result<usize> {
            match n.partner[3 * t + 1] {
                Some((q, true)) if q % 3 == 2 && tris.contains(&(q / 3)) && q / 3 != t => Ok(q / 3),
                _ => Err(Error::InvalidSite("fan around the vertex is not orientation-coherent".into())),
            }
        };
        let b = next(a)?;
        let c = next(b)?;
        if next(c)? != a {
            return Err(Error::InvalidSite("fan around the vertex is not closed".into()));
        }
        let sides = [Some(3 * a), Some(3 * b), Some(3 * c)];
        Ok(n.rebuild(&[a, b, c], &[true], &sides, &[]))
    }

    /// 2-2 move across the interior edge containing `h`.
    pub fn pachner_22(&self, h: HalfEdge) -> Result<Self> {
        self.check_triangle(h.0)?;
        let ((t2, s2), _) = self.partner(h).ok_or_else(|| Error::InvalidSite("edge is on the boundary".into()))?;
        let t1 = h.0;
        if t1 == t2 {
            return Err(Error::InvalidSite("edge joins a triangle to itself".into()));
        }
        let (n, _) = self.normalize(t1, h.1, 0);
        let (n, _) = n.normalize(t2, s2, 0);
        match n.partner[3 * t1] {
            Some((q, true)) if q == 3 * t2 => {}
            _ => return Err(Error::InvalidSite("edge is not orientation-coherent".into())),
        }
        // t1 = (A, B, C), t2 = (B, A, D) -> (C, A, D), (D, B, C)
        let sides = [Some(3 * t1 + 2), Some(3 * t2 + 1), None, Some(3 * t2 + 2), Some(3 * t1 + 1), None];
        Ok(n.rebuild(&[t1, t2], &[true, true], &sides, &[(2, 5, true)]))
    }

    pub fn apply(&self, site: PachnerSite) -> Result<Self> {
        match site {
            PachnerSite::Edge(h) => self.pachner_22(h),
            PachnerSite::Triangle(t) => self.pachner_13(t),
            PachnerSite::Vertex { triangle, corner } => self.pachner_31(triangle, corner),
        }
    }

    /// Two triangles glued along all sides.
    pub fn sphere() -> Self {
        let gl = [
            Gluing { first: (0, 0), second: (1, 2), same: true },
            Gluing { first: (0, 1), second: (1, 1), same: true },
            Gluing { first: (0, 2), second: (1, 0), same: true },
        ];
        Triangulation::new(vec![true, true], &gl).expect("sphere")
    }

    /// Closed orientable surface of genus `g`: the sphere for `g = 0`, otherwise a
    /// `4g`-gon fanned from one corner with sides `4m, 4m+1` identified reversed with
    /// `4m+2, 4m+3`.
    pub fn genus_surface(g: usize) -> Self {
        if g == 0 {
            return Triangulation::sphere();
        }
        polygon_surface(4 * g, 0, |k| (k % 4 < 2).then(|| (k + 2, true)))
    }

    /// Same surface fanned from a different polygon corner (alternative convention).
    pub fn genus_surface_alt(g: usize) -> Self {
        if g == 0 {
            return Triangulation::sphere();
        }
        polygon_surface(4 * g, 1, |k| (k % 4 < 2).then(|| (k + 2, true)))
    }

    /// Connected sum of `k` projective planes: a `4k`-gon with blocks `a b a b`,
    /// each pair glued with the opposite-orientation flag.
    pub fn nonorientable_surface(k: usize) -> Self {
        assert!(k >= 1, "need at least one cross-cap");
        polygon_surface(4 * k, 0, |e| (e % 4 < 2).then(|| (e + 2, false)))
    }
}

/// Fan triangulation of a polygon with `m` sides `P_k -> P_{k+1}` from corner `apex`;
/// `pair(k)` returns the partner side and flag for one representative of each pair.
fn polygon_surface(m: usize, apex: usize, pair: impl Fn(usize) -> Option<(usize, bool)>) -> Triangulation {
    let nt = m - 2;
    // T_j = (P_apex, P_{apex+j+1}, P_{apex+j+2}); polygon side k = P_k -> P_{k+1}.
    let side_of = |k: usize| -> HalfEdge {
        let r = (k + m - apex) % m; // side index relative to the apex
        if r == 0 {
            (0, 0)
        } else if r == m - 1 {
            (nt - 1, 2)
        } else {
            (r - 1, 1)
        }
    };
    let mut gl = Vec::new();
    for j in 0..nt - 1 {
        gl.push(Gluing { first: (j, 2), second: (j + 1, 0), same: true });
    }
    for k in 0..m {
        if let Some((k2, same)) = pair(k) {
            gl.push(Gluing { first: side_of(k), second: side_of(k2), same });
        }
    }
    Triangulation::new(vec![true; nt], &gl).expect("polygon surface")
}

impl fmt::Display for Triangulation {
    /// Text form: one `T +|-` line per triangle, then `(t1,s1)~(t2,s2):same|opp` lines.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &p in &self.positive {
            writeln!(f, "T {}", if p { '+' } else { '-' })?;
        }
        for g in self.gluings() {
            writeln!(
                f,
                "({},{})~({},{}):{}",
                g.first.0,
                g.first.1,
                g.second.0,
                g.second.1,
                if g.same { "same" } else { "opp" }
            )?;
        }
        Ok(())
    }
}

impl std::str::FromStr for Triangulation {
    type Err = Error;

    /// Parses the [`Display`](fmt::Display) form. Blank lines and `#` comments are ignored;
    /// a triangle line may carry three informational corner labels after the sign.
    fn from_str(s: &str) -> Result<Self> {
        let mut positive = Vec::new();
        let mut gl = Vec::new();
        for (lineno, raw) in s.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |m: &str| Error::invalid(format!("line {}: {m}: `{raw}`", lineno + 1));
            if let Some(rest) = line.strip_prefix('T') {
                let mut toks = rest.split_whitespace();
                match toks.next() {
                    Some("+") => positive.push(true),
                    Some("-") => positive.push(false),
                    _ => return Err(err("expected orientation + or -")),
                }
                let labels = toks.count();
                if labels != 0 && labels != 3 {
                    return Err(err("expected zero or three corner labels"));
                }
                continue;
            }
            let (pair, flag) = line.rsplit_once(':').ok_or_else(|| err("expected `:same` or `:opp`"))?;
            let same = match flag.trim() {
                "same" => true,
                "opp" => false,
                _ => return Err(err("flag must be same or opp")),
            };
            let (a, b) = pair.split_once('~').ok_or_else(|| err("expected `~`"))?;
            let parse_he = |x: &str| -> Result<HalfEdge> {
                let x = x.trim().strip_prefix('(').and_then(|r| r.strip_suffix(')')).ok_or_else(|| err("bad half-edge"))?;
                let (t, s) = x.split_once(',').ok_or_else(|| err("bad half-edge"))?;
                let t = t.trim().parse().map_err(|_| err("bad triangle index"))?;
                let s = s.trim().parse().map_err(|_| err("bad side index"))?;
                Ok((t, s))
            };
            gl.push(Gluing { first: parse_he(a)?, second: parse_he(b)?, same });
        }
        Triangulation::new(positive, &gl)
    }
}
