//! Finite-dimensional path algebras with relations.
//!
//! Products use function order: `x*y` applies `y` first. A path `p: u → v`
//! satisfies `p = e_v * p * e_u`, so the span of paths from `u` to `v` is
//! `e_v A e_u`.
//!
//! Construction is length-filtered: raw paths are enumerated up to a cap,
//! the two-sided ideal generated by the relations is spanned inside that
//! window, and row reduction with columns ordered longest-first produces a
//! basis of short path classes. If the basis still contains a path of
//! maximal length the algebra is reported as possibly infinite-dimensional.

use crate::field::{FieldSpec, Scalar};
use crate::quiver::{Path, Quiver};
use std::collections::HashMap;
use std::fmt::Write as _;

pub const DEFAULT_LENGTH_CAP: usize = 12;

#[derive(Clone, Debug)]
pub struct Algebra {
    pub field: FieldSpec,
    pub quiver: Quiver,
    pub cap: usize,
    /// Basis path classes in canonical order (length, then lex).
    pub basis: Vec<Path>,
    pub dim: usize,
    by_path: HashMap<Path, usize>,
    /// Normal form of every raw path of length ≤ cap over the basis.
    nf_raw: HashMap<Path, Vec<Scalar>>,
    /// mult[i][j] = coefficients of basis[i] * basis[j] (apply j first).
    mult: Vec<Vec<Vec<Scalar>>>,
}

impl Algebra {
    pub fn new(
        field: FieldSpec,
        quiver: Quiver,
        relations: &[Vec<(Scalar, Path)>],
        cap: usize,
    ) -> Result<Algebra, String> {
        assert!(cap >= 2, "length cap must be at least 2");
        for rel in relations {
            if rel.is_empty() {
                return Err("empty relation".into());
            }
            let (src, tgt) = (rel[0].1.source, rel[0].1.target);
            for (c, p) in rel {
                assert_eq!(c.field(), field, "relation coefficient field mismatch");
                if p.len() < 2 {
                    return Err(format!(
                        "relation term {} has length < 2",
                        p.display(&quiver)
                    ));
                }
                if p.len() > cap {
                    return Err("relation term longer than the length cap".into());
                }
                if (p.source, p.target) != (src, tgt) {
                    return Err("relation terms are not parallel paths".into());
                }
            }
        }

        let raw = quiver.paths_up_to(cap);
        let nraw = raw.len();
        let raw_idx: HashMap<Path, usize> =
            raw.iter().enumerate().map(|(i, p)| (p.clone(), i)).collect();

        // Elimination order: longest (then lex-largest) paths first, so that
        // pivots fall on long paths and the surviving basis prefers short ones.
        let mut elim: Vec<usize> = (0..nraw).collect();
        elim.sort_by(|&i, &j| raw[j].canonical_key().cmp(&raw[i].canonical_key()));
        let mut col_of = vec![0usize; nraw];
        for (c, &i) in elim.iter().enumerate() {
            col_of[i] = c;
        }

        // Two-sided ideal generators inside the length window: post * rel * pre.
        let mut gens: Vec<Vec<Scalar>> = Vec::new();
        for rel in relations {
            let (src, tgt) = (rel[0].1.source, rel[0].1.target);
            let maxlen = rel.iter().map(|(_, p)| p.len()).max().unwrap();
            for pre in &raw {
                if pre.target != src {
                    continue;
                }
                for post in &raw {
                    if post.source != tgt || pre.len() + maxlen + post.len() > cap {
                        continue;
                    }
                    let mut row = vec![field.zero(); nraw];
                    for (c, p) in rel {
                        let mut arrows = pre.arrows.clone();
                        arrows.extend(&p.arrows);
                        arrows.extend(&post.arrows);
                        let q = Path { arrows, source: pre.source, target: post.target };
                        let col = col_of[raw_idx[&q]];
                        row[col] = row[col].add(c);
                    }
                    gens.push(row);
                }
            }
        }

        // Row reduce the generator span; pivot columns are eliminated paths.
        let gen_rows = if gens.is_empty() {
            vec![vec![field.zero(); nraw]]
        } else {
            gens
        };
        let gen_mat = crate::matrix::Mat::from_rows(field, gen_rows);
        let (r, pivots) = gen_mat.rref();
        let pivot_set: std::collections::HashSet<usize> = pivots.iter().cloned().collect();

        // Surviving raw paths (in canonical order) form the basis.
        let mut basis: Vec<Path> = Vec::new();
        for (i, p) in raw.iter().enumerate() {
            if !pivot_set.contains(&col_of[i]) {
                basis.push(p.clone());
            }
        }
        if let Some(p) = basis.iter().find(|p| p.len() == cap) {
            return Err(format!(
                "possibly infinite-dimensional: basis path {} reaches the length cap {}",
                p.display(&quiver),
                cap
            ));
        }
        for v in 0..quiver.vertices.len() {
            let e = Path { arrows: Vec::new(), source: v, target: v };
            assert!(basis.contains(&e), "identity path eliminated; ideal not admissible");
        }
        let dim = basis.len();
        let by_path: HashMap<Path, usize> =
            basis.iter().enumerate().map(|(i, p)| (p.clone(), i)).collect();

        // Normal forms: basis paths map to unit vectors; each pivot path
        // rewrites, via its reduced row, to a combination of strictly
        // smaller surviving paths.
        let mut basis_col_of_elim: HashMap<usize, usize> = HashMap::new();
        for (i, p) in raw.iter().enumerate() {
            if let Some(&b) = by_path.get(p) {
                basis_col_of_elim.insert(col_of[i], b);
            }
        }
        let mut nf_raw: HashMap<Path, Vec<Scalar>> = HashMap::new();
        for (i, p) in raw.iter().enumerate() {
            let mut v = vec![field.zero(); dim];
            if let Some(&b) = by_path.get(p) {
                v[b] = field.one();
            } else {
                let prow = pivots.iter().position(|&pc| pc == col_of[i]).unwrap();
                for c in 0..nraw {
                    if c == col_of[i] {
                        continue;
                    }
                    let x = r.get(prow, c);
                    if !x.is_zero() {
                        let b = *basis_col_of_elim
                            .get(&c)
                            .expect("reduced row must be supported on surviving paths");
                        v[b] = v[b].sub(&x);
                    }
                }
            }
            nf_raw.insert(p.clone(), v);
        }

        // Multiplication table via normal forms: the concatenation of two
        // basis paths has length ≤ 2·(cap−1) which may exceed the raw window,
        // so products are built one arrow at a time.
        let mut alg = Algebra {
            field,
            quiver,
            cap,
            basis,
            dim,
            by_path,
            nf_raw,
            mult: Vec::new(),
        };
        let mut mult = vec![vec![Vec::new(); dim]; dim];
        for j in 0..dim {
            for i in 0..dim {
                mult[i][j] = alg.product_of_basis(i, j);
            }
        }
        alg.mult = mult;
        Ok(alg)
    }

    /// Builds from relation strings like `"b*a"` or `"b*a - 2 d*c"`.
    pub fn from_strings(
        field: FieldSpec,
        quiver: Quiver,
        relations: &[&str],
        cap: usize,
    ) -> Result<Algebra, String> {
        let rels: Result<Vec<_>, String> = relations
            .iter()
            .map(|s| parse_path_expr(&quiver, field, s))
            .collect();
        Algebra::new(field, quiver, &rels?, cap)
    }

    fn product_of_basis(&self, i: usize, j: usize) -> Vec<Scalar> {
        // Apply basis[j] first, then the arrows of basis[i] one at a time.
        let mut acc = vec![self.field.zero(); self.dim];
        if self.basis[j].target != self.basis[i].source {
            return acc;
        }
        acc[j] = self.field.one();
        for &a in &self.basis[i].arrows.clone() {
            acc = self.apply_arrow(&acc, a);
        }
        acc
    }

    /// Left-multiplies a basis-coefficient vector by a single arrow.
    fn apply_arrow(&self, v: &[Scalar], arrow: usize) -> Vec<Scalar> {
        let mut out = vec![self.field.zero(); self.dim];
        for (b, c) in v.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let p = &self.basis[b];
            if self.quiver.arrows[arrow].source != p.target {
                continue;
            }
            let mut arrows = p.arrows.clone();
            arrows.push(arrow);
            let q = Path {
                arrows,
                source: p.source,
                target: self.quiver.arrows[arrow].target,
            };
            let nf = self
                .nf_raw
                .get(&q)
                .expect("extended path stays within the length window");
            for (b2, x) in nf.iter().enumerate() {
                if !x.is_zero() {
                    out[b2] = out[b2].add(&x.mul(c));
                }
            }
        }
        out
    }

    pub fn vertex_count(&self) -> usize {
        self.quiver.vertices.len()
    }

    pub fn basis_index(&self, p: &Path) -> Option<usize> {
        self.by_path.get(p).copied()
    }

    /// Basis indices of path classes from `u` to `v` (a basis of e_v A e_u).
    pub fn paths_between(&self, u: usize, v: usize) -> Vec<usize> {
        (0..self.dim)
            .filter(|&i| self.basis[i].source == u && self.basis[i].target == v)
            .collect()
    }

    pub fn hom_dim(&self, u: usize, v: usize) -> usize {
        self.paths_between(u, v).len()
    }

    pub fn zero_elem(&self, source: usize, target: usize) -> AlgebraElement {
        AlgebraElement { source, target, coeffs: vec![self.field.zero(); self.dim] }
    }

    pub fn identity_elem(&self, v: usize) -> AlgebraElement {
        let p = Path { arrows: Vec::new(), source: v, target: v };
        self.path_elem(self.basis_index(&p).unwrap())
    }

    pub fn path_elem(&self, i: usize) -> AlgebraElement {
        let p = &self.basis[i];
        let mut coeffs = vec![self.field.zero(); self.dim];
        coeffs[i] = self.field.one();
        AlgebraElement { source: p.source, target: p.target, coeffs }
    }

    pub fn arrow_elem(&self, arrow: usize) -> AlgebraElement {
        let a = &self.quiver.arrows[arrow];
        let p = Path { arrows: vec![arrow], source: a.source, target: a.target };
        self.path_elem(self.basis_index(&p).expect("arrow eliminated from basis"))
    }

    /// Function-order product x*y (apply y first). Non-composable factors
    /// multiply to zero.
    pub fn mul(&self, x: &AlgebraElement, y: &AlgebraElement) -> AlgebraElement {
        let mut out = self.zero_elem(y.source, x.target);
        if y.target != x.source {
            return out;
        }
        for (j, cy) in y.coeffs.iter().enumerate() {
            if cy.is_zero() {
                continue;
            }
            for (i, cx) in x.coeffs.iter().enumerate() {
                if cx.is_zero() {
                    continue;
                }
                let c = cx.mul(cy);
                for (b, m) in self.mult[i][j].iter().enumerate() {
                    if !m.is_zero() {
                        out.coeffs[b] = out.coeffs[b].add(&m.mul(&c));
                    }
                }
            }
        }
        out
    }

    pub fn parse_element(
        &self,
        s: &str,
        expect: Option<(usize, usize)>,
    ) -> Result<AlgebraElement, String> {
        let terms = parse_path_expr(&self.quiver, self.field, s)?;
        if terms.is_empty() {
            return match expect {
                Some((u, v)) => Ok(self.zero_elem(u, v)),
                None => Err(format!("cannot infer endpoints of zero element {s:?}")),
            };
        }
        let (src, tgt) = (terms[0].1.source, terms[0].1.target);
        if let Some((u, v)) = expect {
            if (src, tgt) != (u, v) {
                return Err(format!(
                    "element {s:?} runs {} -> {}, expected {} -> {}",
                    self.quiver.vertices[src],
                    self.quiver.vertices[tgt],
                    self.quiver.vertices[u],
                    self.quiver.vertices[v]
                ));
            }
        }
        let mut out = self.zero_elem(src, tgt);
        for (c, p) in &terms {
            if (p.source, p.target) != (src, tgt) {
                return Err(format!("terms of {s:?} are not parallel"));
            }
            let nf = self
                .nf_raw
                .get(p)
                .ok_or_else(|| format!("path {} exceeds the length cap", p.display(&self.quiver)))?;
            for (b, x) in nf.iter().enumerate() {
                if !x.is_zero() {
                    out.coeffs[b] = out.coeffs[b].add(&x.mul(c));
                }
            }
        }
        Ok(out)
    }

    /// Inverse of x ∈ e_v A e_v inside the local algebra, if x is a unit
    /// (equivalently, its e_v-coefficient is nonzero for a basic algebra).
    pub fn local_inverse(&self, x: &AlgebraElement) -> Option<AlgebraElement> {
        assert_eq!(x.source, x.target, "local inverse needs a loop element");
        let v = x.source;
        let idx = self.paths_between(v, v);
        let n = idx.len();
        let mut lm = crate::matrix::Mat::zeros(self.field, n, n);
        for (c, &b) in idx.iter().enumerate() {
            let prod = self.mul(x, &self.path_elem(b));
            for (r, &b2) in idx.iter().enumerate() {
                lm.set(r, c, prod.coeffs[b2].clone());
            }
        }
        let e = Path { arrows: Vec::new(), source: v, target: v };
        let ei = self.basis_index(&e).unwrap();
        let mut rhs = vec![self.field.zero(); n];
        rhs[idx.iter().position(|&b| b == ei).unwrap()] = self.field.one();
        let sol = lm.solve(&rhs)?;
        let mut out = self.zero_elem(v, v);
        for (k, &b) in idx.iter().enumerate() {
            out.coeffs[b] = sol[k].clone();
        }
        Some(out)
    }

    /// The opposite algebra: reversed quiver, reversed relation paths.
    pub fn opposite(&self) -> Algebra {
        let rels: Vec<Vec<(Scalar, Path)>> = self
            .relations_reversed();
        Algebra::new(self.field, self.quiver.reversed(), &rels, self.cap)
            .expect("opposite of a finite-dimensional algebra is finite-dimensional")
    }

    fn relations_reversed(&self) -> Vec<Vec<(Scalar, Path)>> {
        // Recover a generating set of the ideal: every raw path of length ≤
        // basis-max+1 whose normal form differs from itself. Reversing those
        // identities generates the opposite ideal.
        let maxlen = self.basis.iter().map(|p| p.len()).max().unwrap_or(0);
        let mut rels = Vec::new();
        for p in self.quiver.paths_up_to((maxlen + 1).min(self.cap)) {
            if p.len() < 2 {
                continue;
            }
            if self.by_path.contains_key(&p) {
                continue;
            }
            let nf = &self.nf_raw[&p];
            let mut rel = vec![(self.field.one(), p.reversed())];
            for (b, c) in nf.iter().enumerate() {
                if !c.is_zero() {
                    rel.push((c.neg(), self.basis[b].reversed()));
                }
            }
            rels.push(rel);
        }
        rels
    }

    /// Transports an element along the reversal anti-isomorphism into the
    /// opposite algebra (object of `op` must be `self.opposite()`).
    pub fn transport_op(&self, op: &Algebra, x: &AlgebraElement) -> AlgebraElement {
        let mut out = op.zero_elem(x.target, x.source);
        for (b, c) in x.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let q = self.basis[b].reversed();
            let nf = op.nf_raw.get(&q).expect("reversed basis path within window");
            for (b2, y) in nf.iter().enumerate() {
                if !y.is_zero() {
                    out.coeffs[b2] = out.coeffs[b2].add(&y.mul(c));
                }
            }
        }
        out
    }

    pub fn display_element(&self, x: &AlgebraElement) -> String {
        let mut s = String::new();
        for (b, c) in x.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !s.is_empty() {
                s.push_str(" + ");
            }
            if c.is_one() {
                let _ = write!(s, "{}", self.basis[b].display(&self.quiver));
            } else {
                let _ = write!(s, "{} {}", c, self.basis[b].display(&self.quiver));
            }
        }
        if s.is_empty() {
            s.push('0');
        }
        s
    }
}

/// Element of a path algebra supported on paths `source → target`.
#[derive(Clone, Debug, PartialEq)]
pub struct AlgebraElement {
    pub source: usize,
    pub target: usize,
    pub coeffs: Vec<Scalar>,
}

impl AlgebraElement {
    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn add(&self, o: &AlgebraElement) -> AlgebraElement {
        assert_eq!((self.source, self.target), (o.source, o.target), "endpoint mismatch");
        AlgebraElement {
            source: self.source,
            target: self.target,
            coeffs: self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| a.add(b)).collect(),
        }
    }

    pub fn sub(&self, o: &AlgebraElement) -> AlgebraElement {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> AlgebraElement {
        AlgebraElement {
            source: self.source,
            target: self.target,
            coeffs: self.coeffs.iter().map(|c| c.neg()).collect(),
        }
    }

    pub fn scale(&self, c: &Scalar) -> AlgebraElement {
        AlgebraElement {
            source: self.source,
            target: self.target,
            coeffs: self.coeffs.iter().map(|x| x.mul(c)).collect(),
        }
    }
}

/// Parses a linear combination of parallel paths over the free path space.
/// Grammar: terms joined by `+`/`-`; each term is an optional scalar
/// (integer or fraction) followed by a `*`-chain of arrow names and
/// identity tokens `e<vertex>`, read in function order (rightmost applies
/// first). `0` denotes the zero combination.
pub fn parse_path_expr(
    q: &Quiver,
    field: FieldSpec,
    s: &str,
) -> Result<Vec<(Scalar, Path)>, String> {
    #[derive(Debug, PartialEq)]
    enum Tok {
        Num(String),
        Ident(String),
        Star,
        Plus,
        Minus,
    }
    let mut toks = Vec::new();
    let chars: Vec<char> = s.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let mut t = String::new();
            while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '/') {
                t.push(chars[i]);
                i += 1;
            }
            toks.push(Tok::Num(t));
        } else if c.is_ascii_alphabetic() || c == '_' {
            let mut t = String::new();
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                t.push(chars[i]);
                i += 1;
            }
            toks.push(Tok::Ident(t));
        } else if c == '*' {
            toks.push(Tok::Star);
            i += 1;
        } else if c == '+' {
            toks.push(Tok::Plus);
            i += 1;
        } else if c == '-' {
            toks.push(Tok::Minus);
            i += 1;
        } else {
            return Err(format!("unexpected character {c:?} in {s:?}"));
        }
    }

    let ident_path = |name: &str| -> Result<Path, String> {
        for (v, vn) in q.vertices.iter().enumerate() {
            if name == format!("e{vn}") {
                return Ok(Path { arrows: Vec::new(), source: v, target: v });
            }
        }
        if let Some(a) = q.arrow_index(name) {
            let ar = &q.arrows[a];
            return Ok(Path { arrows: vec![a], source: ar.source, target: ar.target });
        }
        Err(format!("unknown name {name:?}"))
    };

    let mut out: Vec<(Scalar, Path)> = Vec::new();
    let mut pos = 0;
    let mut sign_neg = false;
    // Leading sign.
    if toks.first() == Some(&Tok::Minus) {
        sign_neg = true;
        pos = 1;
    } else if toks.first() == Some(&Tok::Plus) {
        pos = 1;
    }
    if toks.is_empty() {
        return Err("empty element expression".into());
    }
    loop {
        // One term: optional number, then an ident chain.
        let mut coeff = field.one();
        let mut have_coeff = false;
        if let Some(Tok::Num(n)) = toks.get(pos) {
            coeff = field.parse(n)?;
            have_coeff = true;
            pos += 1;
            if toks.get(pos) == Some(&Tok::Star) {
                pos += 1;
            }
        }
        let mut idents: Vec<String> = Vec::new();
        while let Some(Tok::Ident(name)) = toks.get(pos) {
            idents.push(name.clone());
            pos += 1;
            if toks.get(pos) == Some(&Tok::Star) {
                pos += 1;
                if !matches!(toks.get(pos), Some(Tok::Ident(_))) {
                    return Err(format!("dangling '*' in {s:?}"));
                }
            } else {
                break;
            }
        }
        if idents.is_empty() {
            if !(have_coeff && coeff.is_zero()) {
                return Err(format!("scalar term without a path in {s:?}"));
            }
        } else {
            // Function order: rightmost ident applies first.
            let mut path: Option<Path> = None;
            for name in idents.iter().rev() {
                let p = ident_path(name)?;
                path = Some(match path {
                    None => p,
                    Some(cur) => {
                        if p.source != cur.target {
                            return Err(format!(
                                "non-composable factors in {s:?}: {} does not start where {} ends",
                                name,
                                cur.display(q)
                            ));
                        }
                        let mut arrows = cur.arrows.clone();
                        arrows.extend(&p.arrows);
                        Path { arrows, source: cur.source, target: p.target }
                    }
                });
            }
            let p = path.unwrap();
            let c = if sign_neg { coeff.neg() } else { coeff };
            if !c.is_zero() {
                out.push((c, p));
            }
        }
        match toks.get(pos) {
            None => break,
            Some(Tok::Plus) => {
                sign_neg = false;
                pos += 1;
            }
            Some(Tok::Minus) => {
                sign_neg = true;
                pos += 1;
            }
            Some(t) => return Err(format!("unexpected token {t:?} in {s:?}")),
        }
    }
    // Merge repeated paths.
    let mut merged: Vec<(Scalar, Path)> = Vec::new();
    for (c, p) in out {
        if let Some(slot) = merged.iter_mut().find(|(_, q2)| *q2 == p) {
            slot.0 = slot.0.add(&c);
        } else {
            merged.push((c, p));
        }
    }
    merged.retain(|(c, _)| !c.is_zero());
    Ok(merged)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quiver::Arrow;

    fn q_a2() -> Quiver {
        Quiver::new(
            vec!["1".into(), "2".into()],
            vec![Arrow { name: "a".into(), source: 0, target: 1 }],
        )
        .unwrap()
    }

    fn q_cycle3() -> Quiver {
        Quiver::new(
            vec!["1".into(), "2".into(), "3".into()],
            vec![
                Arrow { name: "a".into(), source: 0, target: 1 },
                Arrow { name: "b".into(), source: 1, target: 2 },
                Arrow { name: "c".into(), source: 2, target: 0 },
            ],
        )
        .unwrap()
    }

    #[test]
    fn a2_dimension_and_hom_spaces() {
        let alg = Algebra::from_strings(FieldSpec::Rationals, q_a2(), &[], 12).unwrap();
        assert_eq!(alg.dim, 3);
        let names: Vec<String> =
            alg.basis.iter().map(|p| p.display(&alg.quiver)).collect();
        assert_eq!(names, vec!["e1", "e2", "a"]);
        // e_2 A e_1 is spanned by a; e_1 A e_2 = 0.
        assert_eq!(alg.hom_dim(0, 1), 1);
        assert_eq!(alg.hom_dim(1, 0), 0);
    }

    #[test]
    fn a2_products() {
        let alg = Algebra::from_strings(FieldSpec::Rationals, q_a2(), &[], 12).unwrap();
        let a = alg.arrow_elem(0);
        let e1 = alg.identity_elem(0);
        let e2 = alg.identity_elem(1);
        assert_eq!(alg.mul(&a, &e1), a);
        assert_eq!(alg.mul(&e2, &a), a);
        assert!(alg.mul(&e1, &a).is_zero());
        assert!(alg.mul(&a, &a).is_zero());
    }

    #[test]
    fn cycle3_dimension_seven() {
        let alg =
            Algebra::from_strings(FieldSpec::Rationals, q_cycle3(), &["b*a", "c*b"], 12)
                .unwrap();
        assert_eq!(alg.dim, 7);
        // The surviving length-2 class is a*c : 3 → 2.
        let long: Vec<&Path> = alg.basis.iter().filter(|p| p.len() == 2).collect();
        assert_eq!(long.len(), 1);
        assert_eq!(long[0].display(&alg.quiver), "a*c");
        assert_eq!((long[0].source, long[0].target), (2, 1));
        // b*a = 0 and a*c ≠ 0 in the quotient.
        let a = alg.arrow_elem(0);
        let b = alg.arrow_elem(1);
        let c = alg.arrow_elem(2);
        assert!(alg.mul(&b, &a).is_zero());
        assert!(alg.mul(&c, &b).is_zero());
        assert!(!alg.mul(&a, &c).is_zero());
        assert!(alg.mul(&b, &alg.mul(&a, &c)).is_zero());
    }

    #[test]
    fn a3_dimension_six() {
        let q = Quiver::new(
            vec!["1".into(), "2".into(), "3".into()],
            vec![
                Arrow { name: "a".into(), source: 0, target: 1 },
                Arrow { name: "b".into(), source: 1, target: 2 },
            ],
        )
        .unwrap();
        let alg = Algebra::from_strings(FieldSpec::Rationals, q, &[], 12).unwrap();
        assert_eq!(alg.dim, 6);
    }

    #[test]
    fn a4_with_relations_dimension_seven() {
        let q = Quiver::new(
            vec!["1".into(), "2".into(), "3".into(), "4".into()],
            vec![
                Arrow { name: "a".into(), source: 0, target: 1 },
                Arrow { name: "b".into(), source: 1, target: 2 },
                Arrow { name: "c".into(), source: 2, target: 3 },
            ],
        )
        .unwrap();
        let alg = Algebra::from_strings(FieldSpec::Rationals, q, &["b*a", "c*b"], 12).unwrap();
        assert_eq!(alg.dim, 7);
    }

    #[test]
    fn free_loop_is_reported_infinite() {
        let q = Quiver::new(
            vec!["1".into()],
            vec![Arrow { name: "x".into(), source: 0, target: 0 }],
        )
        .unwrap();
        let err = Algebra::from_strings(FieldSpec::Rationals, q, &[], 5).unwrap_err();
        assert!(err.contains("infinite"));
    }

    #[test]
    fn loop_with_square_zero() {
        let q = Quiver::new(
            vec!["1".into()],
            vec![Arrow { name: "x".into(), source: 0, target: 0 }],
        )
        .unwrap();
        let alg = Algebra::from_strings(FieldSpec::Rationals, q, &["x*x"], 5).unwrap();
        assert_eq!(alg.dim, 2);
        let x = alg.arrow_elem(0);
        assert!(alg.mul(&x, &x).is_zero());
    }

    #[test]
    fn commuting_square_identification() {
        // 1 → 2 → 4 and 1 → 3 → 4 with the two length-2 paths identified.
        let q = Quiver::new(
            vec!["1".into(), "2".into(), "3".into(), "4".into()],
            vec![
                Arrow { name: "a".into(), source: 0, target: 1 },
                Arrow { name: "b".into(), source: 1, target: 3 },
                Arrow { name: "c".into(), source: 0, target: 2 },
                Arrow { name: "d".into(), source: 2, target: 3 },
            ],
        )
        .unwrap();
        let alg =
            Algebra::from_strings(FieldSpec::Rationals, q, &["b*a - d*c"], 12).unwrap();
        assert_eq!(alg.dim, 9);
        let ba = alg.mul(&alg.arrow_elem(1), &alg.arrow_elem(0));
        let dc = alg.mul(&alg.arrow_elem(3), &alg.arrow_elem(2));
        assert_eq!(ba, dc);
        assert!(!ba.is_zero());
    }

    #[test]
    fn associativity_on_cycle3() {
        let alg =
            Algebra::from_strings(FieldSpec::Rationals, q_cycle3(), &["b*a", "c*b"], 12)
                .unwrap();
        for i in 0..alg.dim {
            for j in 0..alg.dim {
                for k in 0..alg.dim {
                    let x = alg.path_elem(i);
                    let y = alg.path_elem(j);
                    let z = alg.path_elem(k);
                    let lhs = alg.mul(&alg.mul(&x, &y), &z);
                    let rhs = alg.mul(&x, &alg.mul(&y, &z));
                    assert_eq!(lhs.coeffs, rhs.coeffs);
                }
            }
        }
    }

    #[test]
    fn parse_and_display() {
        let alg =
            Algebra::from_strings(FieldSpec::Rationals, q_cycle3(), &["b*a", "c*b"], 12)
                .unwrap();
        let x = alg.parse_element("2 a*c", None).unwrap();
        assert_eq!((x.source, x.target), (2, 1));
        assert_eq!(alg.display_element(&x), "2 a*c");
        let y = alg.parse_element("a*c - a*c", Some((2, 1))).unwrap();
        assert!(y.is_zero());
        let z = alg.parse_element("0", Some((0, 0))).unwrap();
        assert!(z.is_zero());
        // b*a reduces to zero in the quotient.
        let w = alg.parse_element("b*a", None).unwrap();
        assert!(w.is_zero());
        // Identity tokens and explicit star-coefficients parse.
        let e = alg.parse_element("e1", None).unwrap();
        assert_eq!(e, alg.identity_elem(0));
        let t = alg.parse_element("3*a + a", None).unwrap();
        assert_eq!(alg.display_element(&t), "4 a");
        assert!(alg.parse_element("a*b", None).is_err());
        assert!(alg.parse_element("nope", None).is_err());
    }

    #[test]
    fn opposite_round_trip() {
        let alg =
            Algebra::from_strings(FieldSpec::Rationals, q_cycle3(), &["b*a", "c*b"], 12)
                .unwrap();
        let op = alg.opposite();
        assert_eq!(op.dim, alg.dim);
        // Reversal is an anti-homomorphism: op(x*y) = op(y)*op(x).
        for i in 0..alg.dim {
            for j in 0..alg.dim {
                let x = alg.path_elem(i);
                let y = alg.path_elem(j);
                let lhs = alg.transport_op(&op, &alg.mul(&x, &y));
                let rhs = op.mul(&alg.transport_op(&op, &y), &alg.transport_op(&op, &x));
                assert_eq!(lhs, rhs);
            }
        }
        // Double reversal is the identity.
        let opop = op.opposite();
        assert_eq!(opop.dim, alg.dim);
        for i in 0..alg.dim {
            let x = alg.path_elem(i);
            let tr = op.transport_op(&opop, &alg.transport_op(&op, &x));
            // Compare coefficient supports through path names.
            let disp_x = alg.display_element(&x);
            let disp_tr = opop.display_element(&tr);
            assert_eq!(disp_x, disp_tr);
        }
    }
}
