//! Finite-dimensional right modules over a path algebra.
//!
//! A module stores one dimension per vertex and one action matrix per
//! arrow: for `a: u → v` the right action is a map `M_v → M_u`. The
//! indecomposable projective `P_v = e_v A` has basis the path classes with
//! target `v`, graded by source, so `Hom(P_u, P_v) ≅ e_v A e_u`.

use crate::algebra::{Algebra, AlgebraElement};
use crate::field::Scalar;
use crate::matrix::Mat;
use crate::quiver::Path;

#[derive(Clone, Debug, PartialEq)]
pub struct RightModule {
    pub dims: Vec<usize>,
    /// act[a]: M_{target(a)} → M_{source(a)}.
    pub act: Vec<Mat>,
}

impl RightModule {
    pub fn new(alg: &Algebra, dims: Vec<usize>, act: Vec<Mat>) -> RightModule {
        assert_eq!(dims.len(), alg.vertex_count());
        assert_eq!(act.len(), alg.quiver.arrows.len());
        for (i, a) in alg.quiver.arrows.iter().enumerate() {
            assert_eq!(
                (act[i].rows, act[i].cols),
                (dims[a.source], dims[a.target]),
                "action matrix shape mismatch for arrow {}",
                a.name
            );
        }
        let m = RightModule { dims, act };
        m
    }

    pub fn zero(alg: &Algebra) -> RightModule {
        let dims = vec![0; alg.vertex_count()];
        let act = alg
            .quiver
            .arrows
            .iter()
            .map(|_| Mat::zeros(alg.field, 0, 0))
            .collect();
        RightModule { dims, act }
    }

    pub fn simple(alg: &Algebra, v: usize) -> RightModule {
        let mut dims = vec![0; alg.vertex_count()];
        dims[v] = 1;
        let act = alg
            .quiver
            .arrows
            .iter()
            .map(|a| Mat::zeros(alg.field, dims[a.source], dims[a.target]))
            .collect();
        RightModule { dims, act }
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.total_dim() == 0
    }

    /// Action matrix of a path: M_{target(p)} → M_{source(p)}.
    pub fn act_of_path(&self, alg: &Algebra, p: &Path) -> Mat {
        let mut m = Mat::identity(alg.field, self.dims[p.target]);
        // Arrows in application order act right-to-left as matrices.
        for &a in p.arrows.iter().rev() {
            m = self.act[a].mul(&m);
        }
        m
    }

    /// Action matrix of an element x ∈ e_v A e_u: M_v → M_u.
    pub fn act_of_elem(&self, alg: &Algebra, x: &AlgebraElement) -> Mat {
        let mut m = Mat::zeros(alg.field, self.dims[x.source], self.dims[x.target]);
        for (b, c) in x.coeffs.iter().enumerate() {
            if !c.is_zero() {
                m = m.add(&self.act_of_path(alg, &alg.basis[b]).scale(c));
            }
        }
        m
    }

    /// Checks that every relation-induced identity holds: the action is a
    /// genuine module structure over the quotient algebra.
    pub fn validate(&self, alg: &Algebra) {
        // Each eliminated raw path must act as its normal form acts.
        let maxlen = alg.basis.iter().map(|p| p.len()).max().unwrap_or(0);
        for p in alg.quiver.paths_up_to((maxlen + 1).min(alg.cap)) {
            if p.len() < 2 {
                continue;
            }
            let lhs = self.act_of_path(alg, &p);
            let nf = alg
                .parse_element(&p.display(&alg.quiver), None)
                .expect("raw path parses");
            let rhs = self.act_of_elem(alg, &nf);
            assert_eq!(lhs, rhs, "path {} violates the relations", p.display(&alg.quiver));
        }
    }

    pub fn direct_sum(alg: &Algebra, parts: &[&RightModule]) -> RightModule {
        let nv = alg.vertex_count();
        let dims: Vec<usize> = (0..nv).map(|v| parts.iter().map(|m| m.dims[v]).sum()).collect();
        let act: Vec<Mat> = (0..alg.quiver.arrows.len())
            .map(|a| {
                let blocks: Vec<&Mat> = parts.iter().map(|m| &m.act[a]).collect();
                Mat::block_diag(alg.field, &blocks)
            })
            .collect();
        RightModule { dims, act }
    }
}

/// A map of right modules: one matrix per vertex, natural for all arrows.
#[derive(Clone, Debug, PartialEq)]
pub struct ModuleMap {
    /// comps[v]: M_v → N_v.
    pub comps: Vec<Mat>,
}

impl ModuleMap {
    pub fn zero(alg: &Algebra, src: &RightModule, tgt: &RightModule) -> ModuleMap {
        ModuleMap {
            comps: (0..alg.vertex_count())
                .map(|v| Mat::zeros(alg.field, tgt.dims[v], src.dims[v]))
                .collect(),
        }
    }

    pub fn identity(alg: &Algebra, m: &RightModule) -> ModuleMap {
        ModuleMap {
            comps: (0..alg.vertex_count()).map(|v| Mat::identity(alg.field, m.dims[v])).collect(),
        }
    }

    pub fn is_natural(&self, alg: &Algebra, src: &RightModule, tgt: &RightModule) -> bool {
        for (i, a) in alg.quiver.arrows.iter().enumerate() {
            let lhs = self.comps[a.source].mul(&src.act[i]);
            let rhs = tgt.act[i].mul(&self.comps[a.target]);
            if lhs != rhs {
                return false;
            }
        }
        true
    }

    pub fn compose(&self, inner: &ModuleMap) -> ModuleMap {
        ModuleMap {
            comps: self
                .comps
                .iter()
                .zip(&inner.comps)
                .map(|(g, f)| g.mul(f))
                .collect(),
        }
    }

    pub fn add(&self, o: &ModuleMap) -> ModuleMap {
        ModuleMap {
            comps: self.comps.iter().zip(&o.comps).map(|(a, b)| a.add(b)).collect(),
        }
    }

    pub fn scale(&self, c: &Scalar) -> ModuleMap {
        ModuleMap { comps: self.comps.iter().map(|m| m.scale(c)).collect() }
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(|m| m.is_zero())
    }

    pub fn is_iso(&self) -> bool {
        self.comps.iter().all(|m| m.rows == m.cols && m.rank() == m.rows)
    }

    fn flatten(&self) -> Vec<Scalar> {
        let mut out = Vec::new();
        for m in &self.comps {
            out.extend(m.entries().iter().cloned());
        }
        out
    }
}

/// Basis of the space of module maps M → N, in a deterministic order.
pub fn hom_modules(alg: &Algebra, m: &RightModule, n: &RightModule) -> Vec<ModuleMap> {
    let nv = alg.vertex_count();
    let f = alg.field;
    // Unknowns: entries of each component, vertex-major, row-major.
    let mut offsets = vec![0usize; nv + 1];
    for v in 0..nv {
        offsets[v + 1] = offsets[v] + n.dims[v] * m.dims[v];
    }
    let total = offsets[nv];
    let mut rows: Vec<Vec<Scalar>> = Vec::new();
    for (i, a) in alg.quiver.arrows.iter().enumerate() {
        // φ_u · act_M(a) − act_N(a) · φ_v = 0, an (n_u × m_v) block of equations.
        let (u, v) = (a.source, a.target);
        for r in 0..n.dims[u] {
            for c in 0..m.dims[v] {
                let mut row = vec![f.zero(); total];
                // (φ_u · act_M(a))[r][c] = Σ_k φ_u[r][k] act_M(a)[k][c]
                for k in 0..m.dims[u] {
                    let coeff = m.act[i].get(k, c);
                    if !coeff.is_zero() {
                        let idx = offsets[u] + r * m.dims[u] + k;
                        row[idx] = row[idx].add(&coeff);
                    }
                }
                // −(act_N(a) · φ_v)[r][c] = −Σ_k act_N(a)[r][k] φ_v[k][c]
                for k in 0..n.dims[v] {
                    let coeff = n.act[i].get(r, k);
                    if !coeff.is_zero() {
                        let idx = offsets[v] + k * m.dims[v] + c;
                        row[idx] = row[idx].sub(&coeff);
                    }
                }
                rows.push(row);
            }
        }
    }
    if rows.is_empty() {
        rows.push(vec![f.zero(); total]);
    }
    let sys = Mat::from_rows(f, rows);
    let (_, ker) = sys.rank_and_kernel();
    let mut out = Vec::new();
    for b in 0..ker.cols {
        let col = ker.column(b);
        let comps = (0..nv)
            .map(|v| {
                let mut mat = Mat::zeros(f, n.dims[v], m.dims[v]);
                for r in 0..n.dims[v] {
                    for c in 0..m.dims[v] {
                        mat.set(r, c, col[offsets[v] + r * m.dims[v] + c].clone());
                    }
                }
                mat
            })
            .collect();
        out.push(ModuleMap { comps });
    }
    out
}

/// Coordinates of `target` in the span of `basis` (flattened linear solve).
pub fn coords_in_span(
    alg: &Algebra,
    basis: &[ModuleMap],
    target: &ModuleMap,
) -> Option<Vec<Scalar>> {
    let f = alg.field;
    let tvec = target.flatten();
    if basis.is_empty() {
        return if tvec.iter().all(|c| c.is_zero()) { Some(Vec::new()) } else { None };
    }
    let cols: Vec<Vec<Scalar>> = basis.iter().map(|b| b.flatten()).collect();
    let n = tvec.len();
    let mut mat = Mat::zeros(f, n, cols.len());
    for (j, col) in cols.iter().enumerate() {
        for (i, x) in col.iter().enumerate() {
            mat.set(i, j, x.clone());
        }
    }
    mat.solve(&tvec)
}

/// Kernel of a module map, with its inclusion.
pub fn kernel(alg: &Algebra, phi: &ModuleMap, src: &RightModule) -> (RightModule, ModuleMap) {
    let nv = alg.vertex_count();
    let incs: Vec<Mat> = (0..nv).map(|v| phi.comps[v].rank_and_kernel().1).collect();
    let dims: Vec<usize> = incs.iter().map(|m| m.cols).collect();
    let act: Vec<Mat> = alg
        .quiver
        .arrows
        .iter()
        .enumerate()
        .map(|(i, a)| {
            let restricted = src.act[i].mul(&incs[a.target]);
            incs[a.source]
                .solve_matrix(&restricted)
                .expect("kernel is closed under the action")
        })
        .collect();
    (RightModule { dims, act }, ModuleMap { comps: incs })
}

/// Cokernel of a module map, with its projection.
pub fn cokernel(alg: &Algebra, phi: &ModuleMap, tgt: &RightModule) -> (RightModule, ModuleMap) {
    let nv = alg.vertex_count();
    let projs: Vec<Mat> = (0..nv).map(|v| phi.comps[v].cokernel_basis().1).collect();
    let dims: Vec<usize> = projs.iter().map(|m| m.rows).collect();
    let f = alg.field;
    let act: Vec<Mat> = alg
        .quiver
        .arrows
        .iter()
        .enumerate()
        .map(|(i, a)| {
            // Induced action: proj_u ∘ act ∘ (any section of proj_v).
            let sec = solve_right_inverse(f, &projs[a.target]);
            projs[a.source].mul(&tgt.act[i]).mul(&sec)
        })
        .collect();
    (RightModule { dims, act }, ModuleMap { comps: projs })
}

/// Right inverse of a full-row-rank matrix.
fn solve_right_inverse(f: crate::field::FieldSpec, m: &Mat) -> Mat {
    m.solve_matrix(&Mat::identity(f, m.rows))
        .expect("projection has full row rank")
}

/// A direct sum of indecomposable projectives with tracked summand layout.
#[derive(Clone, Debug)]
pub struct ProjSum {
    pub vertices: Vec<usize>,
    pub module: RightModule,
    /// index[w]: ordered basis of the w-component as (summand, algebra basis path index).
    pub index: Vec<Vec<(usize, usize)>>,
}

impl ProjSum {
    pub fn new(alg: &Algebra, vertices: Vec<usize>) -> ProjSum {
        let nv = alg.vertex_count();
        let mut index: Vec<Vec<(usize, usize)>> = vec![Vec::new(); nv];
        for w in 0..nv {
            for (s, &v) in vertices.iter().enumerate() {
                for b in alg.paths_between(w, v) {
                    index[w].push((s, b));
                }
            }
        }
        let dims: Vec<usize> = index.iter().map(|l| l.len()).collect();
        let f = alg.field;
        let mut act = Vec::new();
        for (ai, arrow) in alg.quiver.arrows.iter().enumerate() {
            let (u, v) = (arrow.source, arrow.target);
            let mut m = Mat::zeros(f, dims[u], dims[v]);
            for (col, &(s, b)) in index[v].iter().enumerate() {
                // Right action: path (v → vertices[s]) composed after the arrow.
                let prod = alg.mul(&alg.path_elem(b), &alg.arrow_elem(ai));
                for (b2, c) in prod.coeffs.iter().enumerate() {
                    if !c.is_zero() {
                        let row = index[u]
                            .iter()
                            .position(|&(s2, bb)| s2 == s && bb == b2)
                            .expect("product path stays in the same summand");
                        m.set(row, col, c.clone());
                    }
                }
            }
            act.push(m);
        }
        ProjSum { vertices, module: RightModule { dims, act }, index }
    }

    /// Position of the generator e_{v_s} of summand s inside the
    /// vertices[s]-component.
    pub fn generator_pos(&self, alg: &Algebra, s: usize) -> usize {
        let v = self.vertices[s];
        let e = Path { arrows: Vec::new(), source: v, target: v };
        let b = alg.basis_index(&e).unwrap();
        self.index[v].iter().position(|&(s2, bb)| s2 == s && bb == b).unwrap()
    }

    /// The module map P → M sending the generator of summand s to images[s].
    pub fn yoneda_map(
        &self,
        alg: &Algebra,
        m: &RightModule,
        images: &[Vec<Scalar>],
    ) -> ModuleMap {
        assert_eq!(images.len(), self.vertices.len());
        let f = alg.field;
        let comps = (0..alg.vertex_count())
            .map(|w| {
                let mut mat = Mat::zeros(f, m.dims[w], self.module.dims[w]);
                for (col, &(s, b)) in self.index[w].iter().enumerate() {
                    // Basis path p: w → v_s maps to images[s] · p.
                    let actp = m.act_of_path(alg, &alg.basis[b]);
                    let img = actp.apply(&images[s]);
                    for (r, x) in img.iter().enumerate() {
                        mat.set(r, col, x.clone());
                    }
                }
                mat
            })
            .collect();
        ModuleMap { comps }
    }

    /// Reads a module map P1 → P0 between projective sums off as a matrix of
    /// algebra elements, entry (r, c) ∈ e_{v_r} A e_{u_c}.
    pub fn element_matrix(
        alg: &Algebra,
        p1: &ProjSum,
        p0: &ProjSum,
        phi: &ModuleMap,
    ) -> Vec<Vec<AlgebraElement>> {
        let mut out = Vec::new();
        for (r, &vr) in p0.vertices.iter().enumerate() {
            let mut row = Vec::new();
            for (c, &uc) in p1.vertices.iter().enumerate() {
                let gpos = p1.generator_pos(alg, c);
                let img = phi.comps[uc].column(gpos);
                let mut e = alg.zero_elem(uc, vr);
                for (pos, &(s, b)) in p0.index[uc].iter().enumerate() {
                    if s == r && !img[pos].is_zero() {
                        e.coeffs[b] = e.coeffs[b].add(&img[pos]);
                    }
                }
                out_entry_check(alg, &e, uc, vr);
                row.push(e);
            }
            out.push(row);
        }
        out
    }
}

fn out_entry_check(alg: &Algebra, e: &AlgebraElement, u: usize, v: usize) {
    for (b, c) in e.coeffs.iter().enumerate() {
        if !c.is_zero() {
            assert_eq!((alg.basis[b].source, alg.basis[b].target), (u, v));
        }
    }
}

/// Dimensions of top(M) = M / rad M per vertex, with chosen lifted
/// generators (coordinates in M_v).
pub fn top_generators(alg: &Algebra, m: &RightModule) -> Vec<Vec<Vec<Scalar>>> {
    let f = alg.field;
    let nv = alg.vertex_count();
    let mut out = Vec::new();
    for v in 0..nv {
        // rad(M)_v = sum of images of act(a) for arrows a with source v.
        let mut cols: Vec<Mat> = Vec::new();
        for (i, a) in alg.quiver.arrows.iter().enumerate() {
            if a.source == v && m.dims[v] > 0 {
                cols.push(m.act[i].clone());
            }
        }
        let rad = if cols.is_empty() {
            Mat::zeros(f, m.dims[v], 0)
        } else {
            let refs: Vec<&Mat> = cols.iter().collect();
            hstack_all(f, m.dims[v], &refs)
        };
        // Greedily extend a basis of rad_v by standard basis vectors.
        let mut chosen: Vec<Vec<Scalar>> = Vec::new();
        let mut cur = rad.clone();
        let mut rank = cur.rank();
        for i in 0..m.dims[v] {
            let mut e = vec![f.zero(); m.dims[v]];
            e[i] = f.one();
            let mut ext = Mat::zeros(f, m.dims[v], cur.cols + 1);
            for r in 0..m.dims[v] {
                for c in 0..cur.cols {
                    ext.set(r, c, cur.get(r, c).clone());
                }
                ext.set(r, cur.cols, e[r].clone());
            }
            let newrank = ext.rank();
            if newrank > rank {
                chosen.push(e);
                cur = ext;
                rank = newrank;
            }
        }
        out.push(chosen);
    }
    out
}

fn hstack_all(f: crate::field::FieldSpec, rows: usize, mats: &[&Mat]) -> Mat {
    let mut out = Mat::zeros(f, rows, 0);
    for m in mats {
        out = out.hstack(m);
    }
    out
}

/// Minimal projective cover π: P ↠ M.
pub fn projective_cover(alg: &Algebra, m: &RightModule) -> (ProjSum, ModuleMap) {
    let tops = top_generators(alg, m);
    let mut vertices = Vec::new();
    let mut images = Vec::new();
    for (v, gens) in tops.iter().enumerate() {
        for g in gens {
            vertices.push(v);
            images.push(g.clone());
        }
    }
    let p = ProjSum::new(alg, vertices);
    let pi = p.yoneda_map(alg, m, &images);
    // Nakayama: the cover is surjective.
    for v in 0..alg.vertex_count() {
        assert_eq!(pi.comps[v].rank(), m.dims[v], "cover must be surjective");
    }
    (p, pi)
}

pub fn is_projective(alg: &Algebra, m: &RightModule) -> bool {
    let (p, _) = projective_cover(alg, m);
    p.module.dims == m.dims
}

/// True iff the n-th syzygy is projective (bounded search, n ≤ 4).
pub fn proj_dim_leq(alg: &Algebra, m: &RightModule, n: usize) -> bool {
    assert!(n <= 4, "projective dimension bound limited to 4");
    let mut cur = m.clone();
    for _ in 0..=n {
        if is_projective(alg, &cur) {
            return true;
        }
        let (_, pi) = projective_cover(alg, &cur);
        let (p, _) = projective_cover(alg, &cur);
        let (k, _) = kernel(alg, &pi, &p.module);
        cur = k;
    }
    false
}

/// Minimal projective presentation P1 → P0 → M with the boundary map both
/// as a module map and as a matrix of algebra elements.
pub struct Presentation {
    pub p1: ProjSum,
    pub p0: ProjSum,
    pub d: ModuleMap,
    pub d_elems: Vec<Vec<AlgebraElement>>,
    pub cover: ModuleMap,
}

pub fn min_presentation(alg: &Algebra, m: &RightModule) -> Presentation {
    let (p0, pi) = projective_cover(alg, m);
    let (k, inc) = kernel(alg, &pi, &p0.module);
    let (p1, pik) = projective_cover(alg, &k);
    let d = inc.compose(&pik);
    let d_elems = ProjSum::element_matrix(alg, &p1, &p0, &d);
    // Minimality: the boundary matrix is radical-valued.
    for row in &d_elems {
        for e in row {
            for (b, c) in e.coeffs.iter().enumerate() {
                if alg.basis[b].is_empty() {
                    assert!(c.is_zero(), "presentation boundary must be radical-valued");
                }
            }
        }
    }
    Presentation { p1, p0, d, d_elems, cover: pi }
}

/// The A-dual M* = Hom_A(M, A) as a right module over the opposite
/// algebra, together with the chosen vertex-wise Hom bases.
pub fn dual_module(
    alg: &Algebra,
    op: &Algebra,
    m: &RightModule,
) -> (RightModule, Vec<Vec<ModuleMap>>) {
    let nv = alg.vertex_count();
    let f = alg.field;
    // (M*)_v = Hom_A(M, P_v).
    let projs: Vec<ProjSum> = (0..nv).map(|v| ProjSum::new(alg, vec![v])).collect();
    let bases: Vec<Vec<ModuleMap>> =
        (0..nv).map(|v| hom_modules(alg, m, &projs[v].module)).collect();
    let dims: Vec<usize> = bases.iter().map(|b| b.len()).collect();
    let mut act = Vec::new();
    for oa in &op.quiver.arrows {
        // Original arrow a: u → v appears reversed; its op-action maps
        // (M*)_u → (M*)_v by postcomposition with left multiplication.
        let (v, u) = (oa.source, oa.target);
        let ai = alg
            .quiver
            .arrows
            .iter()
            .position(|a| a.name == oa.name)
            .unwrap();
        let mut mat = Mat::zeros(f, dims[v], dims[u]);
        for (col, phi) in bases[u].iter().enumerate() {
            let lm = left_mult_map(alg, &projs[u], &projs[v], &alg.arrow_elem(ai));
            let comp = lm.compose(phi);
            let coords = coords_in_span(alg, &bases[v], &comp)
                .expect("composition stays in the Hom space");
            for (r, x) in coords.iter().enumerate() {
                mat.set(r, col, x.clone());
            }
        }
        act.push(mat);
    }
    (RightModule { dims, act }, bases)
}

/// Left multiplication by x ∈ e_v A e_u as a module map P_u → P_v
/// (projective sums must be the single summands at u and v).
pub fn left_mult_map(
    alg: &Algebra,
    pu: &ProjSum,
    pv: &ProjSum,
    x: &AlgebraElement,
) -> ModuleMap {
    assert_eq!(pu.vertices, vec![x.source]);
    assert_eq!(pv.vertices, vec![x.target]);
    let f = alg.field;
    let comps = (0..alg.vertex_count())
        .map(|w| {
            let mut mat = Mat::zeros(f, pv.module.dims[w], pu.module.dims[w]);
            for (col, &(_, b)) in pu.index[w].iter().enumerate() {
                let prod = alg.mul(x, &alg.path_elem(b));
                for (b2, c) in prod.coeffs.iter().enumerate() {
                    if !c.is_zero() {
                        let row = pv.index[w].iter().position(|&(_, bb)| bb == b2).unwrap();
                        mat.set(row, col, c.clone());
                    }
                }
            }
            mat
        })
        .collect();
    ModuleMap { comps }
}

/// True iff the canonical evaluation M → M** is bijective.
pub fn is_reflexive(alg: &Algebra, m: &RightModule) -> bool {
    let op = alg.opposite();
    let (mstar, bases1) = dual_module(alg, &op, m);
    let opop = op.opposite();
    let (mstarstar, bases2) = dual_module(&op, &opop, &mstar);
    if mstarstar.dims != m.dims {
        return false;
    }
    // Build the evaluation vertex-wise and check invertibility.
    let f = alg.field;
    for w in 0..alg.vertex_count() {
        let pw_op = ProjSum::new(&op, vec![w]);
        let mut ev = Mat::zeros(f, mstarstar.dims[w], m.dims[w]);
        for col in 0..m.dims[w] {
            // m = col-th standard basis vector of M_w; its image is the
            // module map M* → P^op_w with v-component φ ↦ reverse(φ_w(m)).
            let comps: Vec<Mat> = (0..alg.vertex_count())
                .map(|v| {
                    let mut mat =
                        Mat::zeros(f, pw_op.module.dims[v], mstar.dims[v]);
                    for (j, phi) in bases1[v].iter().enumerate() {
                        // φ_w(m) ∈ (P_v)_w: paths w → v; reverse into op.
                        let img = phi.comps[w].column(col);
                        let pv = ProjSum::new(alg, vec![v]);
                        let mut e = alg.zero_elem(w, v);
                        for (pos, &(_, b)) in pv.index[w].iter().enumerate() {
                            if !img[pos].is_zero() {
                                e.coeffs[b] = e.coeffs[b].add(&img[pos]);
                            }
                        }
                        let eop = alg.transport_op(&op, &e);
                        for (pos, &(_, b)) in pw_op.index[v].iter().enumerate() {
                            if !eop.coeffs[b].is_zero() {
                                mat.set(pos, j, eop.coeffs[b].clone());
                            }
                        }
                    }
                    mat
                })
                .collect();
            let as_map = ModuleMap { comps };
            let coords = match coords_in_span(&op, &bases2[w], &as_map) {
                Some(c) => c,
                None => return false,
            };
            for (r, x) in coords.iter().enumerate() {
                ev.set(r, col, x.clone());
            }
        }
        if !(ev.rows == ev.cols && ev.rank() == ev.rows) {
            return false;
        }
    }
    true
}
