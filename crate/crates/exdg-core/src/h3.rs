//! Three-term homotopy complexes and their six-component morphism
//! calculus.
//!
//! An object is a pair of chain maps A₀ →f→ A₁ →j→ A₂ together with a
//! chosen degree −1 map h: A₀ → A₂ satisfying d(h) = −j∘f, so the
//! composite vanishes up to the recorded homotopy. A degree-n morphism is
//! a six-tuple (r₀, r₁, r₂, s₁, s₂, t): three term maps of degree n, two
//! comparison homotopies of degree n−1, and one second-order homotopy of
//! degree n−2. The differential and composition below make these tuples a
//! dg category; closedness, homotopy, and invertibility are all decided
//! by exact linear solves.

use crate::algebra::Algebra;
use crate::complex::{cone_with_maps, ElemMat, GradedMap, ProjComplex};
use crate::homcx::{homotopy_inverse, HomView, MapSolver};
use std::sync::Arc;

fn sign(alg: &Algebra, k: i32, m: GradedMap) -> GradedMap {
    if k.rem_euclid(2) == 0 {
        m
    } else {
        m.neg(alg)
    }
}

/// A₀ →f→ A₁ →j→ A₂ with h: A₀ → A₂ of degree −1 and d(h) = −j∘f.
#[derive(Clone, Debug)]
pub struct HComplex3 {
    pub a0: Arc<ProjComplex>,
    pub a1: Arc<ProjComplex>,
    pub a2: Arc<ProjComplex>,
    pub f: GradedMap,
    pub j: GradedMap,
    pub h: GradedMap,
}

impl HComplex3 {
    /// Checks the three identities d(f) = 0, d(j) = 0, d(h) = −j∘f and
    /// reports the first one that fails.
    pub fn new(alg: &Algebra, f: GradedMap, j: GradedMap, h: GradedMap) -> Result<HComplex3, String> {
        assert_eq!(f.deg, 0);
        assert_eq!(j.deg, 0);
        assert_eq!(h.deg, -1);
        assert_eq!(*j.src, *f.tgt, "j must start where f ends");
        assert_eq!(*h.src, *f.src, "h must start at the first term");
        assert_eq!(*h.tgt, *j.tgt, "h must end at the last term");
        if !f.is_closed(alg) {
            return Err("d(f) is nonzero".into());
        }
        if !j.is_closed(alg) {
            return Err("d(j) is nonzero".into());
        }
        let jf = j.compose(alg, &f);
        if !h.differential(alg).add(alg, &jf).is_zero(alg) {
            return Err("d(h) + j*f is nonzero".into());
        }
        Ok(HComplex3 {
            a0: f.src.clone(),
            a1: f.tgt.clone(),
            a2: j.tgt.clone(),
            f,
            j,
            h,
        })
    }

    /// Completes a chain map f: A → B to A → B → Cone(f) with the
    /// canonical bending homotopy −[1; 0] into Cone(f)^{n−1} = A^n ⊕ B^{n−1}.
    pub fn from_cone(alg: &Algebra, f: &GradedMap) -> HComplex3 {
        let (cone, incl, _) = cone_with_maps(alg, f);
        let x = f.src.clone();
        let mut h = GradedMap::zero(x.clone(), cone.clone(), -1);
        for n in x.lo..=x.hi {
            let id = ElemMat::identity(alg, x.term(n).clone()).neg();
            let z = ElemMat::zero(alg, x.term(n).clone(), f.tgt.term(n - 1).clone());
            h.set_comp(n, id.vstack(&z));
        }
        HComplex3::new(alg, f.clone(), incl, h).expect("cone completion is always valid")
    }

    /// Degree shift; the bending homotopy picks up the sign (−1)^k.
    pub fn shift3(&self, alg: &Algebra, k: i32) -> HComplex3 {
        let f = self.f.shift(alg, k);
        let j = self.j.shift(alg, k);
        let h = sign(alg, k, self.h.shift(alg, k));
        HComplex3::new(alg, f, j, h).expect("shift preserves validity")
    }

    pub fn eq3(&self, alg: &Algebra, o: &HComplex3) -> bool {
        *self.a0 == *o.a0
            && *self.a1 == *o.a1
            && *self.a2 == *o.a2
            && self.f.eq_map(alg, &o.f)
            && self.j.eq_map(alg, &o.j)
            && self.h.eq_map(alg, &o.h)
    }
}

/// A degree-n morphism of three-term homotopy complexes.
#[derive(Clone)]
pub struct SixTuple {
    pub src: Arc<HComplex3>,
    pub tgt: Arc<HComplex3>,
    pub deg: i32,
    pub r0: GradedMap,
    pub r1: GradedMap,
    pub r2: GradedMap,
    pub s1: GradedMap,
    pub s2: GradedMap,
    pub t: GradedMap,
}

impl SixTuple {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        src: Arc<HComplex3>,
        tgt: Arc<HComplex3>,
        deg: i32,
        r0: GradedMap,
        r1: GradedMap,
        r2: GradedMap,
        s1: GradedMap,
        s2: GradedMap,
        t: GradedMap,
    ) -> SixTuple {
        let shapes = [
            (&r0, &src.a0, &tgt.a0, deg),
            (&r1, &src.a1, &tgt.a1, deg),
            (&r2, &src.a2, &tgt.a2, deg),
            (&s1, &src.a0, &tgt.a1, deg - 1),
            (&s2, &src.a1, &tgt.a2, deg - 1),
            (&t, &src.a0, &tgt.a2, deg - 2),
        ];
        for (g, s, tg, d) in shapes {
            assert_eq!(g.deg, d, "component degree mismatch");
            assert_eq!(*g.src, **s, "component source mismatch");
            assert_eq!(*g.tgt, **tg, "component target mismatch");
        }
        SixTuple { src, tgt, deg, r0, r1, r2, s1, s2, t }
    }

    pub fn zero(src: Arc<HComplex3>, tgt: Arc<HComplex3>, deg: i32) -> SixTuple {
        let r0 = GradedMap::zero(src.a0.clone(), tgt.a0.clone(), deg);
        let r1 = GradedMap::zero(src.a1.clone(), tgt.a1.clone(), deg);
        let r2 = GradedMap::zero(src.a2.clone(), tgt.a2.clone(), deg);
        let s1 = GradedMap::zero(src.a0.clone(), tgt.a1.clone(), deg - 1);
        let s2 = GradedMap::zero(src.a1.clone(), tgt.a2.clone(), deg - 1);
        let t = GradedMap::zero(src.a0.clone(), tgt.a2.clone(), deg - 2);
        SixTuple::new(src, tgt, deg, r0, r1, r2, s1, s2, t)
    }

    pub fn identity6(alg: &Algebra, x: &Arc<HComplex3>) -> SixTuple {
        let mut out = SixTuple::zero(x.clone(), x.clone(), 0);
        out.r0 = GradedMap::identity(alg, x.a0.clone());
        out.r1 = GradedMap::identity(alg, x.a1.clone());
        out.r2 = GradedMap::identity(alg, x.a2.clone());
        out
    }

    pub fn comps(&self) -> [&GradedMap; 6] {
        [&self.r0, &self.r1, &self.r2, &self.s1, &self.s2, &self.t]
    }

    pub fn into_comps(self) -> Vec<GradedMap> {
        vec![self.r0, self.r1, self.r2, self.s1, self.s2, self.t]
    }

    pub fn from_comps(
        src: Arc<HComplex3>,
        tgt: Arc<HComplex3>,
        deg: i32,
        mut maps: Vec<GradedMap>,
    ) -> SixTuple {
        assert_eq!(maps.len(), 6);
        let t = maps.pop().unwrap();
        let s2 = maps.pop().unwrap();
        let s1 = maps.pop().unwrap();
        let r2 = maps.pop().unwrap();
        let r1 = maps.pop().unwrap();
        let r0 = maps.pop().unwrap();
        SixTuple::new(src, tgt, deg, r0, r1, r2, s1, s2, t)
    }

    pub fn add6(&self, alg: &Algebra, o: &SixTuple) -> SixTuple {
        assert_eq!(self.deg, o.deg);
        SixTuple::new(
            self.src.clone(),
            self.tgt.clone(),
            self.deg,
            self.r0.add(alg, &o.r0),
            self.r1.add(alg, &o.r1),
            self.r2.add(alg, &o.r2),
            self.s1.add(alg, &o.s1),
            self.s2.add(alg, &o.s2),
            self.t.add(alg, &o.t),
        )
    }

    pub fn sub6(&self, alg: &Algebra, o: &SixTuple) -> SixTuple {
        assert_eq!(self.deg, o.deg);
        SixTuple::new(
            self.src.clone(),
            self.tgt.clone(),
            self.deg,
            self.r0.sub(alg, &o.r0),
            self.r1.sub(alg, &o.r1),
            self.r2.sub(alg, &o.r2),
            self.s1.sub(alg, &o.s1),
            self.s2.sub(alg, &o.s2),
            self.t.sub(alg, &o.t),
        )
    }

    pub fn neg6(&self, alg: &Algebra) -> SixTuple {
        SixTuple::new(
            self.src.clone(),
            self.tgt.clone(),
            self.deg,
            self.r0.neg(alg),
            self.r1.neg(alg),
            self.r2.neg(alg),
            self.s1.neg(alg),
            self.s2.neg(alg),
            self.t.neg(alg),
        )
    }

    pub fn is_zero6(&self, alg: &Algebra) -> bool {
        self.comps().iter().all(|g| g.is_zero(alg))
    }

    pub fn eq6(&self, alg: &Algebra, o: &SixTuple) -> bool {
        self.deg == o.deg
            && self
                .comps()
                .iter()
                .zip(o.comps().iter())
                .all(|(a, b)| a.eq_map(alg, b))
    }

    /// The dg differential on six-tuples; squares to zero.
    pub fn differential6(&self, alg: &Algebra) -> SixTuple {
        let n = self.deg;
        let sf = &self.src.f;
        let sj = &self.src.j;
        let sh = &self.src.h;
        let tf = &self.tgt.f;
        let tj = &self.tgt.j;
        let th = &self.tgt.h;
        let r0 = self.r0.differential(alg);
        let r1 = self.r1.differential(alg);
        let r2 = self.r2.differential(alg);
        let s1 = self
            .s1
            .differential(alg)
            .add(alg, &sign(alg, n + 1, tf.compose(alg, &self.r0)))
            .add(alg, &sign(alg, n, self.r1.compose(alg, sf)));
        let s2 = self
            .s2
            .differential(alg)
            .add(alg, &sign(alg, n + 1, tj.compose(alg, &self.r1)))
            .add(alg, &sign(alg, n, self.r2.compose(alg, sj)));
        let t = self
            .t
            .differential(alg)
            .add(alg, &sign(alg, n, tj.compose(alg, &self.s1)))
            .add(alg, &th.compose(alg, &self.r0))
            .add(alg, &sign(alg, n, self.s2.compose(alg, sf)))
            .add(alg, &sign(alg, n + 1, self.r2.compose(alg, sh)));
        SixTuple::new(self.src.clone(), self.tgt.clone(), n + 1, r0, r1, r2, s1, s2, t)
    }

    pub fn is_closed6(&self, alg: &Algebra) -> bool {
        self.differential6(alg).is_zero6(alg)
    }

    /// Composition `self ∘ inner`, applying `inner` first. Heterogeneous
    /// degrees follow the Koszul signs pinned by the Leibniz rule.
    pub fn compose6(&self, alg: &Algebra, inner: &SixTuple) -> SixTuple {
        let r = inner.deg;
        let r0 = self.r0.compose(alg, &inner.r0);
        let r1 = self.r1.compose(alg, &inner.r1);
        let r2 = self.r2.compose(alg, &inner.r2);
        let s1 = self
            .r1
            .compose(alg, &inner.s1)
            .add(alg, &sign(alg, r, self.s1.compose(alg, &inner.r0)));
        let s2 = self
            .r2
            .compose(alg, &inner.s2)
            .add(alg, &sign(alg, r, self.s2.compose(alg, &inner.r1)));
        let t = self
            .r2
            .compose(alg, &inner.t)
            .add(alg, &self.t.compose(alg, &inner.r0))
            .add(alg, &sign(alg, r + 1, self.s2.compose(alg, &inner.s1)));
        SixTuple::new(
            inner.src.clone(),
            self.tgt.clone(),
            r + self.deg,
            r0,
            r1,
            r2,
            s1,
            s2,
            t,
        )
    }

    /// Cuts a closed degree-0 tuple down to one of its two commuting
    /// squares-up-to-homotopy.
    pub fn restrict(&self, alg: &Algebra, side: SquareSide) -> HSquare {
        assert_eq!(self.deg, 0);
        assert!(self.is_closed6(alg), "restriction needs a closed tuple");
        match side {
            SquareSide::Front => HSquare::new(
                alg,
                self.r0.clone(),
                self.src.f.clone(),
                self.tgt.f.clone(),
                self.r1.clone(),
                self.s1.clone(),
            )
            .expect("front square of a closed tuple"),
            SquareSide::Back => HSquare::new(
                alg,
                self.r1.clone(),
                self.src.j.clone(),
                self.tgt.j.clone(),
                self.r2.clone(),
                self.s2.clone(),
            )
            .expect("back square of a closed tuple"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SquareSide {
    Front,
    Back,
}

fn tuple_slots(src: &Arc<HComplex3>, tgt: &Arc<HComplex3>, base: i32) -> Vec<(HomView, i32)> {
    vec![
        (HomView::new(src.a0.clone(), tgt.a0.clone()), base),
        (HomView::new(src.a1.clone(), tgt.a1.clone()), base),
        (HomView::new(src.a2.clone(), tgt.a2.clone()), base),
        (HomView::new(src.a0.clone(), tgt.a1.clone()), base - 1),
        (HomView::new(src.a1.clone(), tgt.a2.clone()), base - 1),
        (HomView::new(src.a0.clone(), tgt.a2.clone()), base - 2),
    ]
}

/// Finds a degree-(n−1) tuple G with differential6(G) = a − b, if the two
/// closed tuples are homotopic.
pub fn homotopic6(alg: &Algebra, a: &SixTuple, b: &SixTuple) -> Option<SixTuple> {
    assert_eq!(a.deg, b.deg);
    assert!(a.is_closed6(alg), "homotopic6 needs closed tuples");
    assert!(b.is_closed6(alg), "homotopic6 needs closed tuples");
    let src = a.src.clone();
    let tgt = a.tgt.clone();
    let n = a.deg;
    let solver = MapSolver::new(tuple_slots(&src, &tgt, n - 1), tuple_slots(&src, &tgt, n));
    let diff = a.sub6(alg, b);
    let rhs: Vec<GradedMap> = diff.comps().into_iter().cloned().collect();
    let sol = solver.solve(
        alg,
        |maps| {
            SixTuple::from_comps(src.clone(), tgt.clone(), n - 1, maps.to_vec())
                .differential6(alg)
                .into_comps()
        },
        &rhs,
    )?;
    let w = SixTuple::from_comps(a.src.clone(), a.tgt.clone(), n - 1, sol);
    debug_assert!(w.differential6(alg).eq6(alg, &diff));
    Some(w)
}

/// A closed degree-0 tuple is invertible up to homotopy exactly when each
/// of its three term maps is a homotopy equivalence.
pub fn is_iso6(alg: &Algebra, h: &SixTuple) -> bool {
    assert_eq!(h.deg, 0);
    assert!(h.is_closed6(alg), "is_iso6 needs a closed tuple");
    homotopy_inverse(alg, &h.r0).is_some()
        && homotopy_inverse(alg, &h.r1).is_some()
        && homotopy_inverse(alg, &h.r2).is_some()
}

/// Constructs a closed two-sided inverse up to homotopy: one coupled
/// linear solve for G with d(G) = 0, G∘H ≃ id and H∘G ≃ id.
pub fn inverse6(alg: &Algebra, h: &SixTuple) -> Option<SixTuple> {
    assert_eq!(h.deg, 0);
    assert!(h.is_closed6(alg), "inverse6 needs a closed tuple");
    let src = h.src.clone();
    let tgt = h.tgt.clone();
    let mut in_slots = tuple_slots(&tgt, &src, 0);
    in_slots.extend(tuple_slots(&src, &src, -1));
    in_slots.extend(tuple_slots(&tgt, &tgt, -1));
    let mut out_slots = tuple_slots(&tgt, &src, 1);
    out_slots.extend(tuple_slots(&src, &src, 0));
    out_slots.extend(tuple_slots(&tgt, &tgt, 0));
    let solver = MapSolver::new(in_slots, out_slots);
    let mut rhs = SixTuple::zero(tgt.clone(), src.clone(), 1).into_comps();
    rhs.extend(SixTuple::identity6(alg, &src).into_comps());
    rhs.extend(SixTuple::identity6(alg, &tgt).into_comps());
    let sol = solver.solve(
        alg,
        |maps| {
            let g = SixTuple::from_comps(tgt.clone(), src.clone(), 0, maps[0..6].to_vec());
            let w1 = SixTuple::from_comps(src.clone(), src.clone(), -1, maps[6..12].to_vec());
            let w2 = SixTuple::from_comps(tgt.clone(), tgt.clone(), -1, maps[12..18].to_vec());
            let mut out = g.differential6(alg).into_comps();
            out.extend(
                g.compose6(alg, h)
                    .sub6(alg, &w1.differential6(alg))
                    .into_comps(),
            );
            out.extend(
                h.compose6(alg, &g)
                    .sub6(alg, &w2.differential6(alg))
                    .into_comps(),
            );
            out
        },
        &rhs,
    )?;
    let g = SixTuple::from_comps(h.tgt.clone(), h.src.clone(), 0, sol[0..6].to_vec());
    debug_assert!(g.is_closed6(alg));
    Some(g)
}

/// A square of chain maps commuting up to a chosen homotopy:
/// d(s) = right∘top − bottom∘left, with s: x00 → x11 of degree −1.
#[derive(Clone)]
pub struct HSquare {
    pub x00: Arc<ProjComplex>,
    pub x01: Arc<ProjComplex>,
    pub x10: Arc<ProjComplex>,
    pub x11: Arc<ProjComplex>,
    pub top: GradedMap,
    pub left: GradedMap,
    pub right: GradedMap,
    pub bottom: GradedMap,
    pub s: GradedMap,
}

impl HSquare {
    pub fn new(
        alg: &Algebra,
        top: GradedMap,
        left: GradedMap,
        right: GradedMap,
        bottom: GradedMap,
        s: GradedMap,
    ) -> Result<HSquare, String> {
        for (name, e) in [("top", &top), ("left", &left), ("right", &right), ("bottom", &bottom)] {
            if e.deg != 0 {
                return Err(format!("{name} edge must have degree 0"));
            }
            if !e.is_closed(alg) {
                return Err(format!("{name} edge is not closed"));
            }
        }
        assert_eq!(s.deg, -1);
        assert_eq!(*top.src, *left.src);
        assert_eq!(*top.tgt, *right.src);
        assert_eq!(*left.tgt, *bottom.src);
        assert_eq!(*right.tgt, *bottom.tgt);
        assert_eq!(*s.src, *top.src);
        assert_eq!(*s.tgt, *bottom.tgt);
        let want = right
            .compose(alg, &top)
            .sub(alg, &bottom.compose(alg, &left));
        if !s.differential(alg).eq_map(alg, &want) {
            return Err("d(s) does not equal right*top - bottom*left".into());
        }
        Ok(HSquare {
            x00: top.src.clone(),
            x01: top.tgt.clone(),
            x10: left.tgt.clone(),
            x11: bottom.tgt.clone(),
            top,
            left,
            right,
            bottom,
            s,
        })
    }

    /// Mirrors the square along its diagonal; the homotopy flips sign.
    pub fn transpose(&self, alg: &Algebra) -> HSquare {
        HSquare::new(
            alg,
            self.left.clone(),
            self.top.clone(),
            self.bottom.clone(),
            self.right.clone(),
            self.s.neg(alg),
        )
        .expect("transposed square stays valid")
    }
}

/// Two chain maps with a common target: X → Z ← Y.
#[derive(Clone)]
pub struct HCospan {
    pub left: GradedMap,
    pub right: GradedMap,
}

impl HCospan {
    pub fn new(alg: &Algebra, left: GradedMap, right: GradedMap) -> HCospan {
        assert_eq!(left.deg, 0);
        assert_eq!(right.deg, 0);
        assert!(left.is_closed(alg) && right.is_closed(alg));
        assert_eq!(*left.tgt, *right.tgt, "cospan legs must share a target");
        HCospan { left, right }
    }
}

/// Two chain maps with a common source: X ← Z → Y.
#[derive(Clone)]
pub struct HSpan {
    pub left: GradedMap,
    pub right: GradedMap,
}

impl HSpan {
    pub fn new(alg: &Algebra, left: GradedMap, right: GradedMap) -> HSpan {
        assert_eq!(left.deg, 0);
        assert_eq!(right.deg, 0);
        assert!(left.is_closed(alg) && right.is_closed(alg));
        assert_eq!(*left.src, *right.src, "span legs must share a source");
        HSpan { left, right }
    }
}

/// An object of the arrow category: a chain map recorded with its ends.
#[derive(Clone)]
pub struct MorObject {
    pub f: GradedMap,
}

impl MorObject {
    pub fn new(alg: &Algebra, f: GradedMap) -> MorObject {
        assert_eq!(f.deg, 0);
        assert!(f.is_closed(alg), "an arrow object must be a chain map");
        MorObject { f }
    }
}

/// A degree-m morphism of the arrow category: the lower-triangular matrix
/// [[j, 0], [h, l]] with j, l of degree m and h of degree m−1.
#[derive(Clone)]
pub struct MorMorphism {
    pub src: MorObject,
    pub tgt: MorObject,
    pub deg: i32,
    pub j: GradedMap,
    pub l: GradedMap,
    pub h: GradedMap,
}

impl MorMorphism {
    pub fn new(
        src: MorObject,
        tgt: MorObject,
        deg: i32,
        j: GradedMap,
        l: GradedMap,
        h: GradedMap,
    ) -> MorMorphism {
        assert_eq!(j.deg, deg);
        assert_eq!(l.deg, deg);
        assert_eq!(h.deg, deg - 1);
        assert_eq!(*j.src, *src.f.src);
        assert_eq!(*j.tgt, *tgt.f.src);
        assert_eq!(*l.src, *src.f.tgt);
        assert_eq!(*l.tgt, *tgt.f.tgt);
        assert_eq!(*h.src, *src.f.src);
        assert_eq!(*h.tgt, *tgt.f.tgt);
        MorMorphism { src, tgt, deg, j, l, h }
    }

    pub fn zero(src: MorObject, tgt: MorObject, deg: i32) -> MorMorphism {
        let j = GradedMap::zero(src.f.src.clone(), tgt.f.src.clone(), deg);
        let l = GradedMap::zero(src.f.tgt.clone(), tgt.f.tgt.clone(), deg);
        let h = GradedMap::zero(src.f.src.clone(), tgt.f.tgt.clone(), deg - 1);
        MorMorphism::new(src, tgt, deg, j, l, h)
    }

    /// d([[j,0],[h,l]]) = [[−d(j),0],[d(h) + f′∘j − (−1)^m l∘f, d(l)]].
    pub fn differential(&self, alg: &Algebra) -> MorMorphism {
        let m = self.deg;
        let j = self.j.differential(alg).neg(alg);
        let l = self.l.differential(alg);
        let h = self
            .h
            .differential(alg)
            .add(alg, &self.tgt.f.compose(alg, &self.j))
            .add(alg, &sign(alg, m + 1, self.l.compose(alg, &self.src.f)));
        MorMorphism::new(self.src.clone(), self.tgt.clone(), m + 1, j, l, h)
    }

    pub fn is_zero(&self, alg: &Algebra) -> bool {
        self.j.is_zero(alg) && self.l.is_zero(alg) && self.h.is_zero(alg)
    }

    pub fn is_closed(&self, alg: &Algebra) -> bool {
        self.differential(alg).is_zero(alg)
    }
}
