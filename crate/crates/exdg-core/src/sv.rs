//! Super vector spaces as a stable dg category.
//!
//! Objects are Z/2-graded spaces k^{even|odd}; the shift swaps the two
//! parities, so it squares to the identity. Every hom complex carries the
//! zero differential and is truncated at the top: degree-one maps keep only
//! their even-to-odd block and all higher degrees vanish. Two consequences
//! drive everything in this module:
//!
//! * homotopic maps are equal, so a triple (f, j, h) needs j∘f = 0 on the
//!   nose, and the bending homotopy h is genuine extra data rather than a
//!   correction term;
//! * every degree-zero map has a homotopy kernel and cokernel, given by the
//!   parity-swap formulas ker(g) ⊕ Σcok(g) and cok(g) ⊕ Σker(g), which is
//!   what makes the category stable: a triple is left exact if and only if
//!   it is right exact, and every map is both an inflation and a deflation.
//!
//! Because the differential vanishes, a short exact triple with split legs
//! can still be bent by any homotopy and stays split, while the extension
//! group E(ΣA, A) is realized by triples with *zero* middle and an
//! invertible bend. Exactness itself is decided against the two point
//! objects k^{1|0} and k^{0|1} via degree-zero mapping-cone receptors; the
//! parity swap of the points covers every lower degree, and the truncation
//! leaves nothing to test above degree zero.

use crate::field::{FieldSpec, Scalar};
use crate::matrix::Mat;
use rand::Rng;

/// A super vector space k^{even|odd}.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SvObject {
    pub field: FieldSpec,
    pub even: usize,
    pub odd: usize,
}

fn parity(n: i32) -> usize {
    n.rem_euclid(2) as usize
}

impl SvObject {
    pub fn new(field: FieldSpec, even: usize, odd: usize) -> SvObject {
        SvObject { field, even, odd }
    }

    pub fn zero(field: FieldSpec) -> SvObject {
        SvObject::new(field, 0, 0)
    }

    /// The even point k^{1|0}.
    pub fn point_even(field: FieldSpec) -> SvObject {
        SvObject::new(field, 1, 0)
    }

    /// The odd point k^{0|1}.
    pub fn point_odd(field: FieldSpec) -> SvObject {
        SvObject::new(field, 0, 1)
    }

    /// Dimension of the homogeneous part of the given parity (0 = even).
    pub fn part(&self, parity: usize) -> usize {
        match parity {
            0 => self.even,
            1 => self.odd,
            _ => panic!("parity out of range"),
        }
    }

    /// The shift ΣV swaps parities; it is an involution.
    pub fn shift(&self) -> SvObject {
        SvObject::new(self.field, self.odd, self.even)
    }

    pub fn direct_sum(&self, other: &SvObject) -> SvObject {
        assert_eq!(self.field, other.field, "field mismatch");
        SvObject::new(self.field, self.even + other.even, self.odd + other.odd)
    }

    pub fn total_dim(&self) -> usize {
        self.even + self.odd
    }

    pub fn is_zero(&self) -> bool {
        self.total_dim() == 0
    }

    pub fn label(&self) -> String {
        format!("k^({}|{})", self.even, self.odd)
    }
}

/// Dimension of the truncated hom space Hom^deg(X, Y): both parity blocks
/// in degrees ≤ 0, only the even-to-odd block in degree 1, nothing above.
pub fn sv_hom_dim(x: &SvObject, y: &SvObject, deg: i32) -> usize {
    if deg >= 2 {
        0
    } else if deg == 1 {
        x.even * y.odd
    } else if parity(deg) == 0 {
        x.even * y.even + x.odd * y.odd
    } else {
        x.even * y.odd + x.odd * y.even
    }
}

/// A homogeneous map of super vector spaces. The block out of the even
/// part lands in the target parity `deg mod 2`, the block out of the odd
/// part in the opposite one. In degree 1 the odd block is forced to zero,
/// and in degrees ≥ 2 the whole map is zero; both constraints are stable
/// under composition, so no explicit truncation is ever applied.
#[derive(Clone, Debug)]
pub struct SvMap {
    pub src: SvObject,
    pub tgt: SvObject,
    pub deg: i32,
    pub from_even: Mat,
    pub from_odd: Mat,
}

impl SvMap {
    pub fn new(src: SvObject, tgt: SvObject, deg: i32, from_even: Mat, from_odd: Mat) -> SvMap {
        assert_eq!(src.field, tgt.field, "field mismatch");
        assert_eq!(from_even.rows, tgt.part(parity(deg)), "even block rows");
        assert_eq!(from_even.cols, src.even, "even block cols");
        assert_eq!(from_odd.rows, tgt.part(parity(deg + 1)), "odd block rows");
        assert_eq!(from_odd.cols, src.odd, "odd block cols");
        if deg == 1 {
            assert!(from_odd.is_zero(), "degree-one maps have no odd block");
        }
        if deg >= 2 {
            assert!(
                from_even.is_zero() && from_odd.is_zero(),
                "maps of degree two and higher vanish"
            );
        }
        SvMap { src, tgt, deg, from_even, from_odd }
    }

    pub fn zero(src: &SvObject, tgt: &SvObject, deg: i32) -> SvMap {
        let field = src.field;
        SvMap::new(
            src.clone(),
            tgt.clone(),
            deg,
            Mat::zeros(field, tgt.part(parity(deg)), src.even),
            Mat::zeros(field, tgt.part(parity(deg + 1)), src.odd),
        )
    }

    pub fn identity(x: &SvObject) -> SvMap {
        SvMap::new(
            x.clone(),
            x.clone(),
            0,
            Mat::identity(x.field, x.even),
            Mat::identity(x.field, x.odd),
        )
    }

    fn block_from(&self, parity: usize) -> &Mat {
        if parity == 0 {
            &self.from_even
        } else {
            &self.from_odd
        }
    }

    pub fn is_zero(&self) -> bool {
        self.from_even.is_zero() && self.from_odd.is_zero()
    }

    pub fn eq_map(&self, other: &SvMap) -> bool {
        self.src == other.src
            && self.tgt == other.tgt
            && self.deg == other.deg
            && self.from_even == other.from_even
            && self.from_odd == other.from_odd
    }

    pub fn add(&self, other: &SvMap) -> SvMap {
        assert_eq!(self.src, other.src, "source mismatch");
        assert_eq!(self.tgt, other.tgt, "target mismatch");
        assert_eq!(self.deg, other.deg, "degree mismatch");
        SvMap::new(
            self.src.clone(),
            self.tgt.clone(),
            self.deg,
            self.from_even.add(&other.from_even),
            self.from_odd.add(&other.from_odd),
        )
    }

    pub fn sub(&self, other: &SvMap) -> SvMap {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> SvMap {
        SvMap::new(
            self.src.clone(),
            self.tgt.clone(),
            self.deg,
            self.from_even.neg(),
            self.from_odd.neg(),
        )
    }

    pub fn scale(&self, s: &Scalar) -> SvMap {
        SvMap::new(
            self.src.clone(),
            self.tgt.clone(),
            self.deg,
            self.from_even.scale(s),
            self.from_odd.scale(s),
        )
    }

    /// self ∘ other (apply `other` first). Compositions landing in degree
    /// one automatically have zero odd block, and those landing in degree
    /// two or higher vanish outright, so the truncated spaces are closed
    /// under composition on the nose.
    pub fn compose(&self, other: &SvMap) -> SvMap {
        assert_eq!(other.tgt, self.src, "composition mismatch");
        let deg = self.deg + other.deg;
        let re = self.block_from(parity(other.deg)).mul(&other.from_even);
        let ro = self.block_from(parity(other.deg + 1)).mul(&other.from_odd);
        if deg >= 2 {
            debug_assert!(re.is_zero() && ro.is_zero());
            return SvMap::zero(&other.src, &self.tgt, deg);
        }
        if deg == 1 {
            debug_assert!(ro.is_zero());
        }
        SvMap::new(other.src.clone(), self.tgt.clone(), deg, re, ro)
    }

    /// Σf: swaps the two blocks. Only defined in degrees ≤ 0, where both
    /// blocks are present; the truncation has no shift-equivariant
    /// extension to degree one.
    pub fn shift(&self) -> SvMap {
        assert!(self.deg <= 0, "the shift of a map is defined in degrees <= 0");
        SvMap::new(
            self.src.shift(),
            self.tgt.shift(),
            self.deg,
            self.from_odd.clone(),
            self.from_even.clone(),
        )
    }
}

fn mat_from_flat(field: FieldSpec, rows: usize, cols: usize, flat: &[Scalar]) -> Mat {
    assert_eq!(flat.len(), rows * cols, "flat length mismatch");
    let mut m = Mat::zeros(field, rows, cols);
    for r in 0..rows {
        for c in 0..cols {
            m.set(r, c, flat[r * cols + c].clone());
        }
    }
    m
}

/// Flatten a map to coordinates in its truncated hom space: the even block
/// row-major, then (below degree one) the odd block row-major.
pub fn sv_coords(f: &SvMap) -> Vec<Scalar> {
    if f.deg >= 2 {
        return Vec::new();
    }
    let mut out = f.from_even.entries().to_vec();
    if f.deg != 1 {
        out.extend_from_slice(f.from_odd.entries());
    }
    out
}

/// Rebuild a map from truncated-hom-space coordinates.
pub fn sv_from_coords(src: &SvObject, tgt: &SvObject, deg: i32, coords: &[Scalar]) -> SvMap {
    let field = src.field;
    assert_eq!(coords.len(), sv_hom_dim(src, tgt, deg), "coordinate length mismatch");
    if deg >= 2 {
        return SvMap::zero(src, tgt, deg);
    }
    let er = tgt.part(parity(deg));
    let ec = src.even;
    let from_even = mat_from_flat(field, er, ec, &coords[..er * ec]);
    let from_odd = if deg == 1 {
        Mat::zeros(field, tgt.part(parity(deg + 1)), src.odd)
    } else {
        mat_from_flat(field, tgt.part(parity(deg + 1)), src.odd, &coords[er * ec..])
    };
    SvMap::new(src.clone(), tgt.clone(), deg, from_even, from_odd)
}

/// Matrix of post-composition with g: Hom^n(X, src g) → Hom^{n+deg g}(X, tgt g).
pub fn sv_post_matrix(g: &SvMap, x: &SvObject, n: i32) -> Mat {
    let field = x.field;
    let dom = sv_hom_dim(x, &g.src, n);
    let cod = sv_hom_dim(x, &g.tgt, n + g.deg);
    let mut m = Mat::zeros(field, cod, dom);
    for k in 0..dom {
        let mut e = vec![field.zero(); dom];
        e[k] = field.one();
        let col = sv_coords(&g.compose(&sv_from_coords(x, &g.src, n, &e)));
        for (r, v) in col.into_iter().enumerate() {
            m.set(r, k, v);
        }
    }
    m
}

/// Matrix of pre-composition with g: Hom^n(tgt g, Y) → Hom^{n+deg g}(src g, Y).
pub fn sv_pre_matrix(g: &SvMap, y: &SvObject, n: i32) -> Mat {
    let field = y.field;
    let dom = sv_hom_dim(&g.tgt, y, n);
    let cod = sv_hom_dim(&g.src, y, n + g.deg);
    let mut m = Mat::zeros(field, cod, dom);
    for k in 0..dom {
        let mut e = vec![field.zero(); dom];
        e[k] = field.one();
        let col = sv_coords(&sv_from_coords(&g.tgt, y, n, &e).compose(g));
        for (r, v) in col.into_iter().enumerate() {
            m.set(r, k, v);
        }
    }
    m
}

/// A candidate conflation: f then j in degree zero with a degree −1 bend h
/// from the first object to the last. Since every homotopy here is closed,
/// the closure condition d(h) = j∘f forces j∘f = 0 exactly.
#[derive(Clone, Debug)]
pub struct SvTriple {
    pub f: SvMap,
    pub j: SvMap,
    pub h: SvMap,
}

impl SvTriple {
    pub fn new(f: SvMap, j: SvMap, h: SvMap) -> Result<SvTriple, String> {
        if f.deg != 0 || j.deg != 0 {
            return Err("the legs of a triple must have degree zero".to_string());
        }
        if h.deg != -1 {
            return Err("the bend of a triple must have degree minus one".to_string());
        }
        if f.tgt != j.src {
            return Err("the legs of the triple do not share a middle object".to_string());
        }
        if h.src != f.src || h.tgt != j.tgt {
            return Err("the bend must run from the first object to the last".to_string());
        }
        if !j.compose(&f).is_zero() {
            return Err(
                "the legs do not compose to zero, and every homotopy here is closed".to_string(),
            );
        }
        Ok(SvTriple { f, j, h })
    }

    pub fn a(&self) -> &SvObject {
        &self.f.src
    }

    pub fn b(&self) -> &SvObject {
        &self.f.tgt
    }

    pub fn c(&self) -> &SvObject {
        &self.j.tgt
    }
}

/// Decide whether the comparison (m1, m2) identifies its domain with
/// ker(p0) ⊕ cok(p1) — the cohomology of a mapping-cone receptor whose
/// only differential is the composition against the first leg.
fn exact_at(m1: &Mat, m2: &Mat, p0: &Mat, p1: &Mat) -> bool {
    debug_assert!(p0.mul(m1).is_zero(), "comparison must land in the kernel");
    let ker = p0.kernel_basis();
    let ker_coords = match ker.solve_matrix(m1) {
        Some(x) => x,
        None => return false,
    };
    let (_, proj) = p1.cokernel_basis();
    let total = ker_coords.vstack(&proj.mul(m2));
    total.rows == total.cols && total.rank() == total.rows
}

/// Is j the homotopy cokernel of f, witnessed by the bend? Checked as an
/// isomorphism Hom^0(C, S) ≅ ker(−∘f) ⊕ cok(−∘f) against both points.
///
/// Testing only H^0 against the two points is complete: a comparison map
/// is a homotopy equivalence exactly when it induces isomorphisms on
/// H^0-hom functors, every object is a sum of the points, and the parity
/// swap of the points already reaches every negative degree. No condition
/// lives above degree zero — the truncation of the hom complexes has no
/// shift-compatible extension there.
pub fn sv_right_exact(t: &SvTriple) -> bool {
    let field = t.a().field;
    for s in [SvObject::point_even(field), SvObject::point_odd(field)] {
        let m1 = sv_pre_matrix(&t.j, &s, 0);
        let m2 = sv_pre_matrix(&t.h, &s, 0);
        let p0 = sv_pre_matrix(&t.f, &s, 0);
        let p1 = sv_pre_matrix(&t.f, &s, -1);
        if !exact_at(&m1, &m2, &p0, &p1) {
            return false;
        }
    }
    true
}

/// Is f the homotopy kernel of j, witnessed by the bend? Checked as an
/// isomorphism Hom^0(S, A) ≅ ker(j∘−) ⊕ cok(j∘−) against both points;
/// see `sv_right_exact` for why the two points at degree zero suffice.
pub fn sv_left_exact(t: &SvTriple) -> bool {
    let field = t.a().field;
    for s in [SvObject::point_even(field), SvObject::point_odd(field)] {
        let m1 = sv_post_matrix(&t.f, &s, 0);
        let m2 = sv_post_matrix(&t.h, &s, 0);
        let p0 = sv_post_matrix(&t.j, &s, 0);
        let p1 = sv_post_matrix(&t.j, &s, -1);
        if !exact_at(&m1, &m2, &p0, &p1) {
            return false;
        }
    }
    true
}

pub fn sv_is_conflation(t: &SvTriple) -> bool {
    sv_left_exact(t) && sv_right_exact(t)
}

/// Left inverse of a matrix with independent columns: retraction·m = id.
fn retraction(m: &Mat) -> Mat {
    let id = Mat::identity(m.field, m.cols);
    m.transpose()
        .solve_matrix(&id)
        .expect("the columns are independent")
        .transpose()
}

/// Right inverse of a matrix with independent rows: m·section = id.
fn section(m: &Mat) -> Mat {
    let id = Mat::identity(m.field, m.rows);
    m.solve_matrix(&id).expect("the rows are independent")
}

/// The homotopy kernel of a degree-zero map g: the object ker(g) ⊕ Σcok(g)
/// with the inclusion on the kernel part and a bend that sections the
/// cokernel projection. The returned triple is a conflation.
pub fn sv_homotopy_kernel(g: &SvMap) -> SvTriple {
    assert_eq!(g.deg, 0, "kernels are taken of degree-zero maps");
    let field = g.src.field;
    let v = &g.src;
    let w = &g.tgt;
    let k0 = g.from_even.kernel_basis();
    let k1 = g.from_odd.kernel_basis();
    let (c0, p0) = g.from_even.cokernel_basis();
    let (c1, p1) = g.from_odd.cokernel_basis();
    let k = SvObject::new(field, k0.cols + c1, k1.cols + c0);
    let f = SvMap::new(
        k.clone(),
        v.clone(),
        0,
        k0.hstack(&Mat::zeros(field, v.even, c1)),
        k1.hstack(&Mat::zeros(field, v.odd, c0)),
    );
    let h = SvMap::new(
        k,
        w.clone(),
        -1,
        Mat::zeros(field, w.odd, k0.cols).hstack(&section(&p1)),
        Mat::zeros(field, w.even, k1.cols).hstack(&section(&p0)),
    );
    SvTriple::new(f, g.clone(), h).expect("the kernel triple closes strictly")
}

/// The homotopy cokernel of a degree-zero map g: the object cok(g) ⊕ Σker(g)
/// with the projection on the cokernel part and a bend that retracts onto
/// the kernel. The returned triple is a conflation.
pub fn sv_homotopy_cokernel(g: &SvMap) -> SvTriple {
    assert_eq!(g.deg, 0, "cokernels are taken of degree-zero maps");
    let field = g.src.field;
    let u = &g.src;
    let v = &g.tgt;
    let k0 = g.from_even.kernel_basis();
    let k1 = g.from_odd.kernel_basis();
    let (c0, p0) = g.from_even.cokernel_basis();
    let (c1, p1) = g.from_odd.cokernel_basis();
    let c = SvObject::new(field, c0 + k1.cols, c1 + k0.cols);
    let j = SvMap::new(
        v.clone(),
        c.clone(),
        0,
        p0.vstack(&Mat::zeros(field, k1.cols, v.even)),
        p1.vstack(&Mat::zeros(field, k0.cols, v.odd)),
    );
    let h = SvMap::new(
        u.clone(),
        c,
        -1,
        Mat::zeros(field, c1, u.even).vstack(&retraction(&k0)),
        Mat::zeros(field, c0, u.odd).vstack(&retraction(&k1)),
    );
    SvTriple::new(g.clone(), j, h).expect("the cokernel triple closes strictly")
}

/// The split triple A → A⊕C → C with strict legs and zero bend.
pub fn sv_split_triple(a: &SvObject, c: &SvObject) -> SvTriple {
    let field = a.field;
    let b = a.direct_sum(c);
    let f = SvMap::new(
        a.clone(),
        b.clone(),
        0,
        Mat::identity(field, a.even).vstack(&Mat::zeros(field, c.even, a.even)),
        Mat::identity(field, a.odd).vstack(&Mat::zeros(field, c.odd, a.odd)),
    );
    let j = SvMap::new(
        b.clone(),
        c.clone(),
        0,
        Mat::zeros(field, c.even, a.even).hstack(&Mat::identity(field, c.even)),
        Mat::zeros(field, c.odd, a.odd).hstack(&Mat::identity(field, c.odd)),
    );
    let h = SvMap::zero(a, c, -1);
    SvTriple::new(f, j, h).expect("the split triple closes strictly")
}

/// The rotation triple A → 0 → ΣA whose bend is λ times the tautological
/// degree −1 identification of A with ΣA. It is a conflation exactly when
/// λ is invertible, and it is never split unless A = 0.
pub fn sv_rotation_triple(a: &SvObject, lambda: &Scalar) -> SvTriple {
    let field = a.field;
    let zero = SvObject::zero(field);
    let sa = a.shift();
    let f = SvMap::zero(a, &zero, 0);
    let j = SvMap::zero(&zero, &sa, 0);
    let h = SvMap::new(
        a.clone(),
        sa,
        -1,
        Mat::identity(field, a.even).scale(lambda),
        Mat::identity(field, a.odd).scale(lambda),
    );
    SvTriple::new(f, j, h).expect("the rotation triple closes strictly")
}

/// A triple splits when its first leg has a retraction and its last leg a
/// section; for conflations the two conditions are equivalent.
pub fn sv_is_split(t: &SvTriple) -> bool {
    let a = t.a().clone();
    let c = t.c().clone();
    let r = sv_pre_matrix(&t.f, &a, 0).solve(&sv_coords(&SvMap::identity(&a)));
    let s = sv_post_matrix(&t.j, &c, 0).solve(&sv_coords(&SvMap::identity(&c)));
    r.is_some() && s.is_some()
}

/// Dimension of the extension group E(C, A) = Hom^0(C, ΣA): since the
/// differential vanishes, closed degree-zero maps into the shift are the
/// whole story, and the count pairs each parity with the opposite one.
pub fn sv_ext_dim(c: &SvObject, a: &SvObject) -> usize {
    c.even * a.odd + c.odd * a.even
}

pub fn sv_rand_object<R: Rng>(field: FieldSpec, rng: &mut R, max_dim: usize) -> SvObject {
    SvObject::new(field, rng.gen_range(0..=max_dim), rng.gen_range(0..=max_dim))
}

/// A random map with small integer entries, respecting the truncation.
pub fn sv_rand_map<R: Rng>(
    field: FieldSpec,
    rng: &mut R,
    src: &SvObject,
    tgt: &SvObject,
    deg: i32,
) -> SvMap {
    let dim = sv_hom_dim(src, tgt, deg);
    let coords: Vec<Scalar> = (0..dim).map(|_| field.from_i64(rng.gen_range(-2..=2))).collect();
    sv_from_coords(src, tgt, deg, &coords)
}

/// Outcome of the stability sweep: every sampled map must have certified
/// homotopy kernels and cokernels (so every map is both an inflation and a
/// deflation), and every sampled triple must be left exact exactly when it
/// is right exact.
#[derive(Debug)]
pub struct StableReport {
    pub objects: usize,
    pub maps_checked: usize,
    pub kernels_certified: usize,
    pub cokernels_certified: usize,
    pub triples_checked: usize,
    pub exact_triples: usize,
    pub mismatched_sides: usize,
    pub failures: Vec<String>,
}

impl StableReport {
    pub fn all_ok(&self) -> bool {
        self.failures.is_empty() && self.mismatched_sides == 0
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!(
            "objects {}  maps {}  kernels certified {}  cokernels certified {}\n",
            self.objects, self.maps_checked, self.kernels_certified, self.cokernels_certified
        ));
        out.push_str(&format!(
            "triples {}  exact {}  one-sided {}\n",
            self.triples_checked, self.exact_triples, self.mismatched_sides
        ));
        if self.failures.is_empty() {
            out.push_str("stable: every map completes both ways and exactness is two-sided\n");
        } else {
            for f in &self.failures {
                out.push_str(&format!("FAIL {}\n", f));
            }
        }
        out
    }
}

/// A degree-zero map whose blocks are partial identities of the given ranks.
fn rank_profile_map(v: &SvObject, w: &SvObject, r0: usize, r1: usize) -> SvMap {
    let field = v.field;
    let mut fe = Mat::zeros(field, w.even, v.even);
    for i in 0..r0 {
        fe.set(i, i, field.one());
    }
    let mut fo = Mat::zeros(field, w.odd, v.odd);
    for i in 0..r1 {
        fo.set(i, i, field.one());
    }
    SvMap::new(v.clone(), w.clone(), 0, fe, fo)
}

/// Sweep all objects with parts up to `max_dim`: for every ordered pair,
/// every rank profile (exhaustive up to isomorphism) plus seeded random
/// maps. Certifies the kernel and cokernel formulas, completes every map to
/// a conflation both ways, and cross-checks left against right exactness on
/// bent and random triples.
pub fn sv_stable_check(
    field: FieldSpec,
    max_dim: usize,
    samples_per_pair: usize,
    seed: u64,
) -> StableReport {
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut objects = Vec::new();
    for p in 0..=max_dim {
        for q in 0..=max_dim {
            objects.push(SvObject::new(field, p, q));
        }
    }
    let mut report = StableReport {
        objects: objects.len(),
        maps_checked: 0,
        kernels_certified: 0,
        cokernels_certified: 0,
        triples_checked: 0,
        exact_triples: 0,
        mismatched_sides: 0,
        failures: Vec::new(),
    };
    for v in &objects {
        for w in &objects {
            let mut maps = Vec::new();
            for r0 in 0..=v.even.min(w.even) {
                for r1 in 0..=v.odd.min(w.odd) {
                    maps.push(rank_profile_map(v, w, r0, r1));
                }
            }
            for _ in 0..samples_per_pair {
                maps.push(sv_rand_map(field, &mut rng, v, w, 0));
            }
            for g in &maps {
                report.maps_checked += 1;
                let label = format!("{} -> {}", v.label(), w.label());
                let r0 = g.from_even.rank();
                let r1 = g.from_odd.rank();

                let tk = sv_homotopy_kernel(g);
                let expect = SvObject::new(field, v.even - r0 + w.odd - r1, v.odd - r1 + w.even - r0);
                if *tk.a() != expect {
                    report.failures.push(format!("kernel dimensions off for {}", label));
                }
                if sv_is_conflation(&tk) {
                    report.kernels_certified += 1;
                } else {
                    report.failures.push(format!("kernel triple not exact for {}", label));
                }

                let tc = sv_homotopy_cokernel(g);
                let expect = SvObject::new(field, w.even - r0 + v.odd - r1, w.odd - r1 + v.even - r0);
                if *tc.c() != expect {
                    report.failures.push(format!("cokernel dimensions off for {}", label));
                }
                if sv_is_conflation(&tc) {
                    report.cokernels_certified += 1;
                } else {
                    report.failures.push(format!("cokernel triple not exact for {}", label));
                }

                // Bend the certified kernel triple by a random homotopy and
                // pair the map with a random zero-composing second leg; in a
                // stable category both verdicts must always agree.
                let bend = sv_rand_map(field, &mut rng, tk.a(), tk.c(), -1);
                let bent = SvTriple::new(tk.f.clone(), tk.j.clone(), tk.h.add(&bend))
                    .expect("bending preserves the strict closure");
                let cobj = sv_rand_object(field, &mut rng, max_dim);
                let space = sv_pre_matrix(g, &cobj, 0).kernel_basis();
                let mut coords = vec![field.zero(); space.rows];
                for k in 0..space.cols {
                    let weight = field.from_i64(rng.gen_range(-2..=2));
                    for (r, entry) in space.column(k).into_iter().enumerate() {
                        coords[r] = coords[r].add(&entry.mul(&weight));
                    }
                }
                let j2 = sv_from_coords(w, &cobj, 0, &coords);
                let h2 = sv_rand_map(field, &mut rng, v, &cobj, -1);
                let random = SvTriple::new(g.clone(), j2, h2)
                    .expect("the second leg was sampled from the zero-composing space");
                for t in [&bent, &random] {
                    report.triples_checked += 1;
                    let left = sv_left_exact(t);
                    let right = sv_right_exact(t);
                    if left {
                        report.exact_triples += 1;
                    }
                    if left != right {
                        report.mismatched_sides += 1;
                        report.failures.push(format!("one-sided exactness for {}", label));
                    }
                }
            }
        }
    }
    report
}
