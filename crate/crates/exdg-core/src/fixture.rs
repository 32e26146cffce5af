//! Named example bundles: TOML descriptions of path algebras with their
//! probe complexes, distinguished triples and modules, plus the
//! super-vector-space model. The standard bundles are embedded in the
//! binary and resolvable by name; any other input is read as a file path.
//! Every parse error names the fixture and the offending item.

use crate::algebra::Algebra;
use crate::complex::{ElemMat, GradedMap, ProjComplex};
use crate::ext::ProbeSet;
use crate::field::{FieldSpec, Scalar};
use crate::h3::HComplex3;
use crate::matrix::Mat;
use crate::quiver::{Arrow, Quiver};
use crate::sv::{sv_hom_dim, SvMap, SvObject};
use std::sync::Arc;
use toml::Value;

pub const BUILTINS: &[(&str, &str)] = &[
    ("a2-two-term", include_str!("../../../fixtures/a2-two-term.toml")),
    ("a3-two-term", include_str!("../../../fixtures/a3-two-term.toml")),
    ("cycle3", include_str!("../../../fixtures/cycle3.toml")),
    ("linear-a4-rel", include_str!("../../../fixtures/linear-a4-rel.toml")),
    ("supervect", include_str!("../../../fixtures/supervect.toml")),
];

pub fn builtin_names() -> Vec<&'static str> {
    BUILTINS.iter().map(|(n, _)| *n).collect()
}

/// A path-algebra bundle: the algebra, the amplitude window defining the
/// subcategory, the ordered probe list, and any named simple modules and
/// candidate triples.
pub struct PathFixture {
    pub name: String,
    pub algebra: Algebra,
    pub amplitude: (i32, i32),
    pub probes: Vec<(String, Arc<ProjComplex>)>,
    /// label → vertex index of the simple module it names.
    pub modules: Vec<(String, usize)>,
    pub triples: Vec<(String, Arc<HComplex3>)>,
}

impl PathFixture {
    pub fn probe(&self, label: &str) -> Option<&Arc<ProjComplex>> {
        self.probes.iter().find(|(l, _)| l == label).map(|(_, p)| p)
    }

    pub fn triple(&self, label: &str) -> Option<&Arc<HComplex3>> {
        self.triples.iter().find(|(l, _)| l == label).map(|(_, t)| t)
    }

    pub fn module_vertex(&self, label: &str) -> Option<usize> {
        self.modules.iter().find(|(l, _)| l == label).map(|(_, v)| *v)
    }

    pub fn probe_set(&self) -> ProbeSet {
        ProbeSet::new(
            self.probes.iter().map(|(_, p)| p.clone()).collect(),
            self.probes.iter().map(|(l, _)| l.clone()).collect(),
        )
    }
}

/// A super-vector-space bundle: named objects and maps over one field,
/// with the sweep bound used by the stability checks.
pub struct SuperFixture {
    pub name: String,
    pub field: FieldSpec,
    pub max_dim: usize,
    pub objects: Vec<(String, SvObject)>,
    pub maps: Vec<(String, SvMap)>,
}

impl SuperFixture {
    pub fn object(&self, label: &str) -> Option<&SvObject> {
        self.objects.iter().find(|(l, _)| l == label).map(|(_, o)| o)
    }

    pub fn map(&self, label: &str) -> Option<&SvMap> {
        self.maps.iter().find(|(l, _)| l == label).map(|(_, m)| m)
    }
}

pub enum FixtureData {
    PathAlgebra(Box<PathFixture>),
    Super(Box<SuperFixture>),
}

impl std::fmt::Debug for FixtureData {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            FixtureData::PathAlgebra(x) => write!(f, "PathFixture({})", x.name),
            FixtureData::Super(x) => write!(f, "SuperFixture({})", x.name),
        }
    }
}

impl FixtureData {
    pub fn name(&self) -> &str {
        match self {
            FixtureData::PathAlgebra(f) => &f.name,
            FixtureData::Super(f) => &f.name,
        }
    }
}

/// Resolve a built-in name or a file path to a parsed fixture.
pub fn resolve(input: &str) -> Result<FixtureData, String> {
    if let Some((_, text)) = BUILTINS.iter().find(|(n, _)| *n == input) {
        return parse_fixture(input, text);
    }
    match std::fs::read_to_string(input) {
        Ok(text) => parse_fixture(input, &text),
        Err(e) => Err(format!(
            "fixture {:?} is neither a built-in name ({}) nor a readable file: {}",
            input,
            builtin_names().join(", "),
            e
        )),
    }
}

// ---- toml access helpers -------------------------------------------------

fn get<'a>(t: &'a Value, key: &str) -> Option<&'a Value> {
    t.as_table().and_then(|m| m.get(key))
}

fn need<'a>(t: &'a Value, key: &str, ctx: &str) -> Result<&'a Value, String> {
    get(t, key).ok_or_else(|| format!("{ctx}: missing key {key:?}"))
}

fn need_str<'a>(t: &'a Value, key: &str, ctx: &str) -> Result<&'a str, String> {
    need(t, key, ctx)?
        .as_str()
        .ok_or_else(|| format!("{ctx}: key {key:?} must be a string"))
}

fn need_int(t: &Value, key: &str, ctx: &str) -> Result<i64, String> {
    need(t, key, ctx)?
        .as_integer()
        .ok_or_else(|| format!("{ctx}: key {key:?} must be an integer"))
}

fn need_array<'a>(t: &'a Value, key: &str, ctx: &str) -> Result<&'a [Value], String> {
    need(t, key, ctx)?
        .as_array()
        .map(|a| a.as_slice())
        .ok_or_else(|| format!("{ctx}: key {key:?} must be an array"))
}

fn opt_array<'a>(t: &'a Value, key: &str, ctx: &str) -> Result<&'a [Value], String> {
    match get(t, key) {
        None => Ok(&[]),
        Some(v) => v
            .as_array()
            .map(|a| a.as_slice())
            .ok_or_else(|| format!("{ctx}: key {key:?} must be an array")),
    }
}

fn as_str_list(v: &[Value], ctx: &str) -> Result<Vec<String>, String> {
    v.iter()
        .map(|x| {
            x.as_str()
                .map(str::to_string)
                .ok_or_else(|| format!("{ctx}: expected an array of strings"))
        })
        .collect()
}

fn is_prime(p: u32) -> bool {
    p >= 2 && (2..=p / 2).all(|d| p % d != 0 || d * d > p) && (p == 2 || p % 2 == 1) && {
        let mut d = 3;
        let mut ok = p == 2 || p % 2 != 0;
        while ok && d * d <= p {
            ok = p % d != 0;
            d += 2;
        }
        ok
    }
}

fn parse_field(s: &str, ctx: &str) -> Result<FieldSpec, String> {
    if s == "Q" {
        return Ok(FieldSpec::Rationals);
    }
    if let Some(rest) = s.strip_prefix('F') {
        if let Ok(p) = rest.parse::<u32>() {
            if is_prime(p) {
                return Ok(FieldSpec::prime(p));
            }
            return Err(format!("{ctx}: field characteristic {p} is not prime"));
        }
    }
    Err(format!("{ctx}: unknown field {s:?} (use \"Q\" or \"F<p>\")"))
}

// ---- path-algebra fixtures -----------------------------------------------

fn parse_quiver(root: &Value, ctx: &str) -> Result<Quiver, String> {
    let qt = need(root, "quiver", ctx)?;
    let qctx = format!("{ctx}: quiver");
    let vertices = as_str_list(need_array(qt, "vertices", &qctx)?, &qctx)?;
    let mut arrows = Vec::new();
    for (i, a) in need_array(qt, "arrows", &qctx)?.iter().enumerate() {
        let actx = format!("{qctx}: arrow {i}");
        let parts = a
            .as_array()
            .ok_or_else(|| format!("{actx}: expected [name, source, target]"))?;
        let parts = as_str_list(parts, &actx)?;
        if parts.len() != 3 {
            return Err(format!("{actx}: expected [name, source, target]"));
        }
        let find = |name: &str| {
            vertices
                .iter()
                .position(|v| v == name)
                .ok_or_else(|| format!("{actx}: unknown vertex {name:?}"))
        };
        arrows.push(Arrow { name: parts[0].clone(), source: find(&parts[1])?, target: find(&parts[2])? });
    }
    Quiver::new(vertices, arrows).map_err(|e| format!("{qctx}: {e}"))
}

/// Parse one matrix entry: the empty string and "0" denote zero.
fn parse_entry(
    alg: &Algebra,
    s: &str,
    src_v: usize,
    tgt_v: usize,
    ctx: &str,
) -> Result<crate::algebra::AlgebraElement, String> {
    let trimmed = s.trim();
    if trimmed.is_empty() || trimmed == "0" {
        return Ok(alg.zero_elem(src_v, tgt_v));
    }
    alg.parse_element(trimmed, Some((src_v, tgt_v)))
        .map_err(|e| format!("{ctx}: {e}"))
}

/// Parse an entry grid into an element matrix from the summands `src` to
/// the summands `tgt` (rows index targets, columns index sources).
fn parse_elem_mat(
    alg: &Algebra,
    grid: &Value,
    src: &[usize],
    tgt: &[usize],
    ctx: &str,
) -> Result<ElemMat, String> {
    let rows = grid
        .as_array()
        .ok_or_else(|| format!("{ctx}: expected an array of rows"))?;
    if rows.len() != tgt.len() {
        return Err(format!("{ctx}: expected {} rows, found {}", tgt.len(), rows.len()));
    }
    let mut entries = Vec::with_capacity(tgt.len());
    for (r, row) in rows.iter().enumerate() {
        let cells = row
            .as_array()
            .ok_or_else(|| format!("{ctx}: row {r} must be an array"))?;
        if cells.len() != src.len() {
            return Err(format!("{ctx}: row {r}: expected {} columns, found {}", src.len(), cells.len()));
        }
        let mut out_row = Vec::with_capacity(src.len());
        for (c, cell) in cells.iter().enumerate() {
            let s = cell
                .as_str()
                .ok_or_else(|| format!("{ctx}: row {r} column {c} must be a string"))?;
            out_row.push(parse_entry(alg, s, src[c], tgt[r], &format!("{ctx}: row {r} column {c}"))?);
        }
        entries.push(out_row);
    }
    Ok(ElemMat::from_entries(src.to_vec(), tgt.to_vec(), entries))
}

fn parse_probe(
    alg: &Algebra,
    item: &Value,
    ctx: &str,
) -> Result<(String, Arc<ProjComplex>), String> {
    let label = need_str(item, "label", ctx)?.to_string();
    let pctx = format!("{ctx} ({label})");
    let lo = need_int(item, "lo", &pctx)? as i32;
    let mut terms = Vec::new();
    for (k, t) in need_array(item, "terms", &pctx)?.iter().enumerate() {
        let tctx = format!("{pctx}: terms[{k}]");
        let names = t
            .as_array()
            .ok_or_else(|| format!("{tctx}: expected an array of vertex names"))?;
        let names = as_str_list(names, &tctx)?;
        let mut vs = Vec::new();
        for n in names {
            vs.push(
                alg.quiver
                    .vertex_index(&n)
                    .ok_or_else(|| format!("{tctx}: unknown vertex {n:?}"))?,
            );
        }
        terms.push(vs);
    }
    let diff_vals = opt_array(item, "diffs", &pctx)?;
    if diff_vals.len() + 1 != terms.len() {
        return Err(format!(
            "{pctx}: {} terms need {} differentials, found {}",
            terms.len(),
            terms.len() - 1,
            diff_vals.len()
        ));
    }
    let mut diffs = Vec::new();
    for (k, grid) in diff_vals.iter().enumerate() {
        diffs.push(parse_elem_mat(
            alg,
            grid,
            &terms[k],
            &terms[k + 1],
            &format!("{pctx}: diffs[{k}]"),
        )?);
    }
    for k in 0..diffs.len().saturating_sub(1) {
        if !diffs[k + 1].mul(alg, &diffs[k]).is_zero() {
            return Err(format!(
                "{pctx}: the differential does not square to zero out of degree {}",
                lo + k as i32
            ));
        }
    }
    Ok((label, Arc::new(ProjComplex::new(alg, lo, terms, diffs))))
}

fn parse_map_components(
    alg: &Algebra,
    item: &Value,
    key: &str,
    src: &Arc<ProjComplex>,
    tgt: &Arc<ProjComplex>,
    deg: i32,
    ctx: &str,
) -> Result<GradedMap, String> {
    let mut map = GradedMap::zero(src.clone(), tgt.clone(), deg);
    for (i, comp) in opt_array(item, key, ctx)?.iter().enumerate() {
        let cctx = format!("{ctx}: {key}[{i}]");
        let n = need_int(comp, "deg", &cctx)? as i32;
        let grid = need(comp, "entries", &cctx)?;
        let m = parse_elem_mat(alg, grid, src.term(n), tgt.term(n + deg), &format!("{cctx}: entries"))?;
        map.set_comp(n, m);
    }
    Ok(map)
}

fn parse_path_fixture(root: &Value, name: &str, ctx: &str) -> Result<PathFixture, String> {
    let field = parse_field(need_str(root, "field", ctx)?, ctx)?;
    let cap = need_int(root, "cap", ctx)? as usize;
    let amp = need_array(root, "amplitude", ctx)?;
    let amplitude = match amp {
        [l, h] => match (l.as_integer(), h.as_integer()) {
            (Some(l), Some(h)) if l <= h => (l as i32, h as i32),
            _ => return Err(format!("{ctx}: amplitude must be [lo, hi] with lo <= hi")),
        },
        _ => return Err(format!("{ctx}: amplitude must be [lo, hi]")),
    };
    let quiver = parse_quiver(root, ctx)?;
    let relations = as_str_list(opt_array(root, "relations", ctx)?, &format!("{ctx}: relations"))?;
    let rel_refs: Vec<&str> = relations.iter().map(String::as_str).collect();
    let algebra = Algebra::from_strings(field, quiver, &rel_refs, cap)
        .map_err(|e| format!("{ctx}: algebra: {e}"))?;

    let mut probes: Vec<(String, Arc<ProjComplex>)> = Vec::new();
    for (i, item) in opt_array(root, "probe", ctx)?.iter().enumerate() {
        let p = parse_probe(&algebra, item, &format!("{ctx}: probe {i}"))?;
        if probes.iter().any(|(l, _)| *l == p.0) {
            return Err(format!("{ctx}: duplicate probe label {:?}", p.0));
        }
        probes.push(p);
    }

    let mut modules = Vec::new();
    for (i, item) in opt_array(root, "module", ctx)?.iter().enumerate() {
        let mctx = format!("{ctx}: module {i}");
        let label = need_str(item, "label", &mctx)?.to_string();
        let at = need_str(item, "simple_at", &mctx)?;
        let v = algebra
            .quiver
            .vertex_index(at)
            .ok_or_else(|| format!("{mctx} ({label}): unknown vertex {at:?}"))?;
        modules.push((label, v));
    }

    let mut triples = Vec::new();
    for (i, item) in opt_array(root, "triple", ctx)?.iter().enumerate() {
        let tctx = format!("{ctx}: triple {i}");
        let label = need_str(item, "label", &tctx)?.to_string();
        let tctx = format!("{tctx} ({label})");
        let find = |key: &str| -> Result<Arc<ProjComplex>, String> {
            let l = need_str(item, key, &tctx)?;
            probes
                .iter()
                .find(|(pl, _)| pl == l)
                .map(|(_, p)| p.clone())
                .ok_or_else(|| format!("{tctx}: unknown probe {l:?} for end {key:?}"))
        };
        let (a, b, c) = (find("a")?, find("b")?, find("c")?);
        let f = parse_map_components(&algebra, item, "f", &a, &b, 0, &tctx)?;
        let j = parse_map_components(&algebra, item, "j", &b, &c, 0, &tctx)?;
        let h = parse_map_components(&algebra, item, "h", &a, &c, -1, &tctx)?;
        let x = HComplex3::new(&algebra, f, j, h).map_err(|e| format!("{tctx}: {e}"))?;
        triples.push((label, Arc::new(x)));
    }

    Ok(PathFixture { name: name.to_string(), algebra, amplitude, probes, modules, triples })
}

// ---- super fixtures ------------------------------------------------------

fn parse_scalar(field: FieldSpec, v: &Value, ctx: &str) -> Result<Scalar, String> {
    match v {
        Value::Integer(n) => Ok(field.from_i64(*n)),
        Value::String(s) => field.parse(s).map_err(|e| format!("{ctx}: {e}")),
        _ => Err(format!("{ctx}: scalar entries must be integers or strings")),
    }
}

fn parse_block(
    field: FieldSpec,
    item: &Value,
    key: &str,
    rows: usize,
    cols: usize,
    ctx: &str,
) -> Result<Mat, String> {
    let Some(v) = get(item, key) else {
        return Ok(Mat::zeros(field, rows, cols));
    };
    let bctx = format!("{ctx}: {key}");
    let grid = v
        .as_array()
        .ok_or_else(|| format!("{bctx}: expected an array of rows"))?;
    if grid.len() != rows {
        return Err(format!("{bctx}: expected {rows} rows, found {}", grid.len()));
    }
    let mut m = Mat::zeros(field, rows, cols);
    for (r, row) in grid.iter().enumerate() {
        let cells = row
            .as_array()
            .ok_or_else(|| format!("{bctx}: row {r} must be an array"))?;
        if cells.len() != cols {
            return Err(format!("{bctx}: row {r}: expected {cols} columns, found {}", cells.len()));
        }
        for (c, cell) in cells.iter().enumerate() {
            m.set(r, c, parse_scalar(field, cell, &format!("{bctx}: row {r} column {c}"))?);
        }
    }
    Ok(m)
}

fn parse_super_fixture(root: &Value, name: &str, ctx: &str) -> Result<SuperFixture, String> {
    let field = parse_field(need_str(root, "field", ctx)?, ctx)?;
    let max_dim = match get(root, "max_dim") {
        None => 2,
        Some(v) => v
            .as_integer()
            .filter(|n| *n >= 0)
            .ok_or_else(|| format!("{ctx}: max_dim must be a nonnegative integer"))?
            as usize,
    };

    let mut objects: Vec<(String, SvObject)> = Vec::new();
    for (i, item) in opt_array(root, "object", ctx)?.iter().enumerate() {
        let octx = format!("{ctx}: object {i}");
        let label = need_str(item, "label", &octx)?.to_string();
        let even = need_int(item, "even", &octx)?;
        let odd = need_int(item, "odd", &octx)?;
        if even < 0 || odd < 0 {
            return Err(format!("{octx} ({label}): dimensions must be nonnegative"));
        }
        if objects.iter().any(|(l, _)| *l == label) {
            return Err(format!("{ctx}: duplicate object label {label:?}"));
        }
        objects.push((label, SvObject::new(field, even as usize, odd as usize)));
    }

    let mut maps = Vec::new();
    for (i, item) in opt_array(root, "map", ctx)?.iter().enumerate() {
        let mctx = format!("{ctx}: map {i}");
        let label = need_str(item, "label", &mctx)?.to_string();
        let mctx = format!("{mctx} ({label})");
        let find = |key: &str| -> Result<SvObject, String> {
            let l = need_str(item, key, &mctx)?;
            objects
                .iter()
                .find(|(ol, _)| ol == l)
                .map(|(_, o)| o.clone())
                .ok_or_else(|| format!("{mctx}: unknown object {l:?}"))
        };
        let src = find("src")?;
        let tgt = find("tgt")?;
        let deg = match get(item, "deg") {
            None => 0,
            Some(v) => v
                .as_integer()
                .ok_or_else(|| format!("{mctx}: deg must be an integer"))? as i32,
        };
        let even_rows = tgt.part(deg.rem_euclid(2) as usize);
        let odd_rows = tgt.part((deg + 1).rem_euclid(2) as usize);
        let from_even = parse_block(field, item, "from_even", even_rows, src.even, &mctx)?;
        let from_odd = parse_block(field, item, "from_odd", odd_rows, src.odd, &mctx)?;
        if deg == 1 && !from_odd.is_zero() {
            return Err(format!("{mctx}: degree-one maps have no odd block"));
        }
        if deg >= 2 && sv_hom_dim(&src, &tgt, deg) == 0 && !(from_even.is_zero() && from_odd.is_zero()) {
            return Err(format!("{mctx}: maps of degree two and higher vanish"));
        }
        maps.push((label, SvMap::new(src, tgt, deg, from_even, from_odd)));
    }

    Ok(SuperFixture { name: name.to_string(), field, max_dim, objects, maps })
}

// ---- entry point ---------------------------------------------------------

pub fn parse_fixture(origin: &str, text: &str) -> Result<FixtureData, String> {
    let root: Value = text
        .parse()
        .map_err(|e| format!("fixture {origin}: TOML syntax: {e}"))?;
    let ctx = format!("fixture {origin}");
    let name = need_str(&root, "name", &ctx)?.to_string();
    let kind = match get(&root, "kind") {
        None => "path-algebra",
        Some(v) => v
            .as_str()
            .ok_or_else(|| format!("{ctx}: kind must be a string"))?,
    };
    match kind {
        "path-algebra" => Ok(FixtureData::PathAlgebra(Box::new(parse_path_fixture(
            &root, &name, &ctx,
        )?))),
        "super" => Ok(FixtureData::Super(Box::new(parse_super_fixture(&root, &name, &ctx)?))),
        other => Err(format!(
            "{ctx}: unknown kind {other:?} (use \"path-algebra\" or \"super\")"
        )),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn builtin(name: &str) -> FixtureData {
        resolve(name).expect("builtin parses")
    }

    fn path(name: &str) -> Box<PathFixture> {
        match builtin(name) {
            FixtureData::PathAlgebra(f) => f,
            FixtureData::Super(_) => panic!("expected a path-algebra fixture"),
        }
    }

    #[test]
    fn the_two_vertex_bundle_has_the_five_window_objects() {
        let f = path("a2-two-term");
        assert_eq!(f.algebra.dim, 3);
        assert_eq!(f.amplitude, (-1, 0));
        let labels: Vec<&str> = f.probes.iter().map(|(l, _)| l.as_str()).collect();
        assert_eq!(labels, ["P1", "P2", "S2", "SP1", "SP2"]);
        let s2 = f.probe("S2").unwrap();
        assert_eq!((s2.lo, s2.hi), (-1, 0));
        assert_eq!(*f.probe("SP1").unwrap().term(-1), vec![0]);
        assert!(f.probe_set().position(s2).is_some());
        // The inclusion-of-the-radical triple with its bending homotopy.
        let beta = f.triple("beta").unwrap();
        assert_eq!(beta.a1.terms, f.probe("P2").unwrap().terms);
        assert!(!beta.h.comp(&f.algebra, 0).is_zero());
    }

    #[test]
    fn the_three_vertex_bundle_has_the_nine_window_objects() {
        let f = path("a3-two-term");
        assert_eq!(f.algebra.dim, 6);
        let labels: Vec<&str> = f.probes.iter().map(|(l, _)| l.as_str()).collect();
        assert_eq!(labels, ["P1", "P2", "P3", "S2", "S3", "M", "SP1", "SP2", "SP3"]);
        // M is the two-term complex along the composite path.
        let m = f.probe("M").unwrap();
        assert_eq!(*m.term(-1), vec![0]);
        assert_eq!(*m.term(0), vec![2]);
        assert!(!m.diff(&f.algebra, -1).is_zero());
    }

    #[test]
    fn the_bound_cycle_bundle_carries_its_counterexample() {
        let f = path("cycle3");
        assert_eq!(f.algebra.dim, 7);
        assert_eq!(f.algebra.field, FieldSpec::prime(5));
        assert_eq!(f.module_vertex("S2"), Some(1));
        let t = f.triple("counterexample").unwrap();
        assert_eq!(t.a0.terms, f.probe("S2").unwrap().terms);
        assert!(t.a2.is_zero() || *t.a2.term(0) == vec![0]);
        // The closure d(h) = j∘f held, otherwise parsing would have failed;
        // the composite leg itself is the zero relation c*b.
        assert!(t.j.compose(&f.algebra, &t.f).comp(&f.algebra, 0).is_zero());
    }

    #[test]
    fn the_bound_linear_bundle_parses_with_the_same_shape() {
        let f = path("linear-a4-rel");
        assert_eq!(f.algebra.dim, 7);
        assert_eq!(f.algebra.field, FieldSpec::Rationals);
        assert_eq!(f.module_vertex("S2"), Some(1));
        assert!(f.triple("counterexample").is_some());
    }

    #[test]
    fn the_super_bundle_names_objects_and_maps() {
        let FixtureData::Super(f) = builtin("supervect") else {
            panic!("expected the super fixture");
        };
        assert_eq!(f.field, FieldSpec::Rationals);
        assert_eq!(f.max_dim, 2);
        assert_eq!(f.objects.len(), 4);
        assert_eq!(*f.object("V").unwrap(), SvObject::new(f.field, 1, 1));
        let mix = f.map("mix").unwrap();
        assert_eq!(mix.src, *f.object("W").unwrap());
        assert_eq!(mix.tgt, *f.object("V").unwrap());
        assert_eq!(*mix.from_even.get(0, 1), f.field.from_i64(-1));
        assert_eq!(*mix.from_odd.get(0, 0), f.field.from_i64(2));
        // Omitted blocks default to zero with the right shape.
        let embed = f.map("embed").unwrap();
        assert_eq!((embed.from_odd.rows, embed.from_odd.cols), (1, 0));
    }

    #[test]
    fn diagnostics_name_the_fixture_and_the_item() {
        let bad_vertex = r#"
            name = "t"
            field = "Q"
            cap = 4
            amplitude = [-1, 0]
            [quiver]
            vertices = ["1"]
            arrows = [["a", "1", "2"]]
        "#;
        let e = parse_fixture("t", bad_vertex).unwrap_err();
        assert!(e.contains("unknown vertex"), "{e}");

        let bad_entry = r#"
            name = "t"
            field = "Q"
            cap = 4
            amplitude = [-1, 0]
            relations = []
            [quiver]
            vertices = ["1", "2"]
            arrows = [["a", "1", "2"]]
            [[probe]]
            label = "X"
            lo = -1
            terms = [["2"], ["1"]]
            diffs = [[["a"]]]
        "#;
        let e = parse_fixture("t", bad_entry).unwrap_err();
        assert!(e.contains("probe 0 (X)") && e.contains("expected"), "{e}");

        let bad_field = r#"name = "t"
            kind = "super"
            field = "F6"
        "#;
        let e = parse_fixture("t", bad_field).unwrap_err();
        assert!(e.contains("not prime"), "{e}");

        let bad_square = r#"
            name = "t"
            field = "Q"
            cap = 4
            amplitude = [-2, 0]
            relations = []
            [quiver]
            vertices = ["1", "2", "3"]
            arrows = [["a", "1", "2"], ["b", "2", "3"]]
            [[probe]]
            label = "X"
            lo = -2
            terms = [["1"], ["2"], ["3"]]
            diffs = [[["a"]], [["b"]]]
        "#;
        let e = parse_fixture("t", bad_square).unwrap_err();
        assert!(e.contains("square to zero"), "{e}");

        let e = resolve("no-such-fixture-anywhere").unwrap_err();
        assert!(e.contains("a2-two-term"), "{e}");
    }
}
