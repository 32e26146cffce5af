//! Seeded random generators for complexes and maps, used by the law
//! suites and the axiom checkers. All draws go through a caller-supplied
//! RNG so every suite is reproducible from its seed.

use crate::algebra::{Algebra, AlgebraElement};
use crate::complex::{cone_with_maps, ElemMat, GradedMap, ProjComplex};
use crate::field::Scalar;
use crate::h3::{HComplex3, SixTuple};
use crate::homcx::HomView;
use rand::Rng;
use std::sync::Arc;

/// A small scalar in {−2, …, 2}.
pub fn rand_scalar<R: Rng>(alg: &Algebra, rng: &mut R) -> Scalar {
    alg.field.from_i64(rng.gen_range(-2..=2))
}

pub fn rand_element<R: Rng>(alg: &Algebra, rng: &mut R, u: usize, v: usize) -> AlgebraElement {
    let mut out = alg.zero_elem(u, v);
    for b in alg.paths_between(u, v) {
        out.coeffs[b] = rand_scalar(alg, rng);
    }
    out
}

pub fn rand_elem_mat<R: Rng>(
    alg: &Algebra,
    rng: &mut R,
    src: Vec<usize>,
    tgt: Vec<usize>,
) -> ElemMat {
    let mut m = ElemMat::zero(alg, src, tgt);
    for r in 0..m.rows() {
        for c in 0..m.cols() {
            let e = rand_element(alg, rng, m.src[c], m.tgt[r]);
            m.entries[r][c] = e;
        }
    }
    m
}

pub fn rand_vertices<R: Rng>(alg: &Algebra, rng: &mut R, max_width: usize) -> Vec<usize> {
    let w = rng.gen_range(0..=max_width);
    (0..w).map(|_| rng.gen_range(0..alg.vertex_count())).collect()
}

/// A random two-term complex in degrees −1, 0 (any differential squares
/// to zero there).
pub fn rand_two_term<R: Rng>(alg: &Algebra, rng: &mut R, max_width: usize) -> Arc<ProjComplex> {
    let src = rand_vertices(alg, rng, max_width);
    let tgt = rand_vertices(alg, rng, max_width);
    let d = rand_elem_mat(alg, rng, src, tgt);
    Arc::new(ProjComplex::two_term(alg, d))
}

/// A random bounded complex: stalks at depth 0, cones over random chain
/// maps at positive depth.
pub fn rand_complex<R: Rng>(
    alg: &Algebra,
    rng: &mut R,
    depth: usize,
    max_width: usize,
) -> Arc<ProjComplex> {
    if depth == 0 {
        let vs = rand_vertices(alg, rng, max_width);
        let deg = rng.gen_range(-2..=1);
        return Arc::new(if vs.is_empty() {
            ProjComplex::zero()
        } else {
            ProjComplex::stalk(vs, deg)
        });
    }
    let x = rand_complex(alg, rng, depth - 1, max_width);
    let y = rand_complex(alg, rng, depth - 1, max_width);
    let f = rand_chain_map(alg, rng, &x, &y);
    let (cone, _, _) = cone_with_maps(alg, &f);
    cone
}

/// A random graded map of the given degree (not necessarily closed).
pub fn rand_graded_map<R: Rng>(
    alg: &Algebra,
    rng: &mut R,
    x: &Arc<ProjComplex>,
    y: &Arc<ProjComplex>,
    deg: i32,
) -> GradedMap {
    let view = HomView::new(x.clone(), y.clone());
    let n = view.dim(alg, deg);
    let coords: Vec<Scalar> = (0..n).map(|_| rand_scalar(alg, rng)).collect();
    view.unflatten(alg, deg, &coords)
}

/// A random chain map: a random combination of a basis of closed
/// degree-0 maps.
pub fn rand_chain_map<R: Rng>(
    alg: &Algebra,
    rng: &mut R,
    x: &Arc<ProjComplex>,
    y: &Arc<ProjComplex>,
) -> GradedMap {
    let view = HomView::new(x.clone(), y.clone());
    let d0 = view.dmatrix(alg, 0);
    let (_, ker) = d0.rank_and_kernel();
    let mut coords = vec![alg.field.zero(); view.dim(alg, 0)];
    for j in 0..ker.cols {
        let c = rand_scalar(alg, rng);
        if c.is_zero() {
            continue;
        }
        let col = ker.column(j);
        for (i, x0) in col.into_iter().enumerate() {
            coords[i] = coords[i].add(&x0.mul(&c));
        }
    }
    let f = view.unflatten(alg, 0, &coords);
    debug_assert!(f.is_chain_map(alg));
    f
}

/// A random three-term homotopy complex: either a strict pair of maps
/// with zero last term, or a mapping-cone completion of a random chain
/// map with a twisted bending homotopy, possibly shifted.
pub fn rand_h3<R: Rng>(alg: &Algebra, rng: &mut R) -> Arc<HComplex3> {
    let variant = rng.gen_range(0..4);
    let x = rand_complex(alg, rng, 1, 2);
    let y = rand_complex(alg, rng, 1, 2);
    let f = rand_chain_map(alg, rng, &x, &y);
    if variant == 0 {
        let z = Arc::new(ProjComplex::zero());
        let j = GradedMap::zero(y.clone(), z.clone(), 0);
        let h = GradedMap::zero(x.clone(), z.clone(), -1);
        return Arc::new(HComplex3::new(alg, f, j, h).unwrap());
    }
    let base = HComplex3::from_cone(alg, &f);
    let u = rand_graded_map(alg, rng, &base.a0, &base.a2, -2);
    let mut t = HComplex3::new(
        alg,
        base.f.clone(),
        base.j.clone(),
        base.h.add(alg, &u.differential(alg)),
    )
    .unwrap();
    if variant == 2 {
        t = t.shift3(alg, 1);
    } else if variant == 3 {
        t = t.shift3(alg, -1);
    }
    Arc::new(t)
}

/// A random six-component morphism of the given degree.
pub fn rand_six<R: Rng>(
    alg: &Algebra,
    rng: &mut R,
    src: &Arc<HComplex3>,
    tgt: &Arc<HComplex3>,
    deg: i32,
) -> SixTuple {
    SixTuple::new(
        src.clone(),
        tgt.clone(),
        deg,
        rand_graded_map(alg, rng, &src.a0, &tgt.a0, deg),
        rand_graded_map(alg, rng, &src.a1, &tgt.a1, deg),
        rand_graded_map(alg, rng, &src.a2, &tgt.a2, deg),
        rand_graded_map(alg, rng, &src.a0, &tgt.a1, deg - 1),
        rand_graded_map(alg, rng, &src.a1, &tgt.a2, deg - 1),
        rand_graded_map(alg, rng, &src.a0, &tgt.a2, deg - 2),
    )
}
