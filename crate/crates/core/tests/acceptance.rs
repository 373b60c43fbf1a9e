//! End-to-end acceptance run: one line per criterion, each with a pinned time
//! budget. Randomised criteria read their seed from `ABSOLIM_SEED`.

use std::collections::HashMap;
use std::panic::{self, AssertUnwindSafe};
use std::time::{Duration, Instant};

use absolim::base::rational::{format_q, parse_q, q, Matrix, Q};
use absolim::base::suplat::small_lattices;
use absolim::base::{self, BaseMorphism, BaseObject, BaseTag, Lattice};
use absolim::cli::format::{self, Document, Fragment, MorphismSpec};
use absolim::cli::{self, FAILS, HOLDS};
use absolim::instances;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const DEFAULT_SEED: u64 = 0x5eed_ab50;

fn seed() -> u64 {
    std::env::var("ABSOLIM_SEED").ok().and_then(|s| s.parse().ok()).unwrap_or(DEFAULT_SEED)
}

fn run_cli(args: &[&str], input: &str) -> (i32, String) {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let argv = std::iter::once("absolim").chain(args.iter().copied());
    let code = cli::run(argv, &mut input.as_bytes(), &mut out, &mut err);
    (code, String::from_utf8(out).unwrap() + &String::from_utf8(err).unwrap())
}

fn example(name: &str) -> String {
    let (code, text) = run_cli(&["example", name], "");
    assert_eq!(code, HOLDS, "{text}");
    text
}

/// Reads the matrix of a `1 x n` or `n x 1` matq element written in a document.
fn matrix_of(spec: &MorphismSpec) -> Matrix {
    let MorphismSpec::Matrix(rows) = spec else { panic!("expected a matrix") };
    let cols = rows.first().map_or(0, Vec::len);
    let entries = rows.iter().flatten().map(|s| parse_q(s).expect("canonical rational")).collect();
    Matrix::from_rows(rows.len(), cols, entries)
}

/// The morphism `x -> y` named by an element of the internal hom.
fn unname(x: usize, y: usize, name: Matrix) -> Matrix {
    let (ox, oy) = (BaseObject::MatQ(x), BaseObject::MatQ(y));
    let g = BaseMorphism::from_matrix(BaseObject::MatQ(1), BaseObject::MatQ(x * y), name).unwrap();
    let f = base::right_unitor_inv(&ox).unwrap().then(&base::uncurry_left(&ox, &oy, &g).unwrap()).unwrap();
    f.matrix().unwrap().clone()
}

fn isqrt(n: usize) -> usize {
    (0..=n).find(|k| k * k >= n).unwrap()
}

// ---------------------------------------------------------------------------
// 1. exhaustive bijection on the idempotent

/// Brute force over all functions: pairs `(i : r -> s, p : s -> r)` with
/// `p i = 1` and `i p = e`, over every candidate retract size in `retracts`.
fn count_splittings(e: &[usize], retracts: &[usize]) -> usize {
    let s = e.len();
    let all = |n: usize, m: usize| -> Vec<Vec<usize>> {
        let mut out = vec![vec![]];
        for _ in 0..n {
            out = out.into_iter().flat_map(|t| (0..m).map(move |v| [t.clone(), vec![v]].concat())).collect();
        }
        out
    };
    let mut count = 0;
    for &r in retracts {
        for i in all(r, s) {
            for p in all(s, r) {
                let pi_is_id = (0..r).all(|x| p[i[x]] == x);
                let ip_is_e = (0..s).all(|x| i[p[x]] == e[x]);
                if pi_is_id && ip_is_e {
                    count += 1;
                }
            }
        }
    }
    count
}

fn audit_counts(report: &str) -> (usize, usize, usize) {
    let grab = |key: &str| -> usize {
        let at = report.find(key).unwrap_or_else(|| panic!("no {key:?} in {report}")) + key.len();
        report[at..].trim_start().split(|c: char| !c.is_ascii_digit()).next().unwrap().parse().unwrap()
    };
    (grab("colimiting"), grab("limiting"), grab("square pairs"))
}

fn criterion_1() -> String {
    // ambient {A = 2 elements, B = 1 element}; e collapses A onto one point
    let e = [0, 0];
    let split = count_splittings(&e, &[1]);
    let unsplit = count_splittings(&e, &[2]);
    assert_eq!((split, unsplit), (1, 0));
    let (code, out) = run_cli(&["audit"], &example("idempotent"));
    assert_eq!(code, HOLDS, "{out}");
    assert_eq!(audit_counts(&out), (split, split, split), "{out}");
    let (code, out) = run_cli(&["audit"], &example("idempotent-unsplit"));
    assert_eq!(code, HOLDS, "{out}");
    assert_eq!(audit_counts(&out), (unsplit, unsplit, unsplit), "{out}");
    format!("counts {split}/{split}/{split} split, {unsplit}/{unsplit}/{unsplit} unsplit")
}

// ---------------------------------------------------------------------------
// 2. oracle agreement on random finite-set instances

const RANDOM_INSTANCES: usize = 100;

fn criterion_2() -> String {
    let seed = seed();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut holds, mut fails) = (0, 0);
    for k in 0..RANDOM_INSTANCES {
        let d = instances::random_finset_instance(&mut rng).unwrap();
        let text = format::emit(&format::colimit_document(&format!("random-{k}"), &d));
        let (fast, out) = run_cli(&["check-colimit"], &text);
        let (slow, witness) = run_cli(&["oracle-colimit", "--max-size", "3"], &text);
        assert!(fast == HOLDS || fast == FAILS, "{out}");
        assert_eq!(fast, slow, "instance {k} (seed {seed}):\n{out}{witness}");
        if fast == HOLDS {
            holds += 1;
        } else {
            fails += 1;
        }
    }
    format!("{RANDOM_INSTANCES} instances (seed {seed}): {holds} colimits, {fails} not")
}

// ---------------------------------------------------------------------------
// 3. biproduct equations and single-entry perturbations

fn biproduct_equations_hold(i: &[Matrix], p: &[Matrix]) -> bool {
    let z = i[0].rows();
    let delta = (0..i.len()).all(|j| {
        (0..i.len()).all(|k| {
            let pi = p[j].mul(&i[k]);
            if j == k {
                pi == Matrix::identity(pi.rows())
            } else {
                pi.is_zero()
            }
        })
    });
    let sum = i.iter().zip(p).fold(Matrix::zeros(z, z), |acc, (ij, pj)| acc.add(&ij.mul(pj)));
    delta && sum == Matrix::identity(z)
}

fn biproduct_legs(doc: &Document) -> (Vec<Matrix>, Vec<Matrix>) {
    let c = &doc.categories[0];
    let dim = |label: &str| {
        let h = c.homs.iter().find(|h| h.dom == label && h.cod == label).unwrap();
        let format::ObjectSpec::Size(n) = h.object else { panic!("matq object") };
        isqrt(n)
    };
    let task = &doc.tasks[0];
    let functor = |name: &str| doc.functors.iter().find(|f| f.name == name).unwrap();
    let (f, z) = (functor(&task.diagram), functor(&task.apex));
    let image = |fd: &format::FunctorDecl, x: &str| fd.objects.iter().find(|o| o[0] == x).unwrap()[1].clone();
    let apex = dim(&image(z, &z.objects[0][0]));
    let map = |name: &str| doc.maps.iter().find(|m| m.name == name).unwrap();
    let (a, b) = (map(task.cocone.as_ref().unwrap()), map(task.cone.as_ref().unwrap()));
    let mut inj = vec![];
    let mut proj = vec![];
    for fo in &f.objects {
        let x = dim(&fo[1]);
        let ai = a.components.iter().find(|e| e.target == fo[0]).unwrap();
        let bi = b.components.iter().find(|e| e.source == fo[0]).unwrap();
        inj.push(unname(x, apex, matrix_of(&ai.morphism)));
        proj.push(unname(apex, x, matrix_of(&bi.morphism)));
    }
    (inj, proj)
}

fn criterion_3() -> String {
    let text = example("biproduct");
    let doc = format::parse_syntax(&text).unwrap();
    let (i, p) = biproduct_legs(&doc);
    assert!(biproduct_equations_hold(&i, &p));
    let (code, out) = run_cli(&["check-squares"], &text);
    assert_eq!(code, HOLDS, "{out}");
    let task = &doc.tasks[0];
    let legs = [task.cocone.clone().unwrap(), task.cone.clone().unwrap()];
    let mut flips = 0;
    for m in doc.maps.iter().enumerate().filter(|(_, m)| legs.contains(&m.name)).map(|(k, _)| k) {
        for c in 0..doc.maps[m].components.len() {
            let MorphismSpec::Matrix(rows) = &doc.maps[m].components[c].morphism else { unreachable!() };
            for r in 0..rows.len() {
                for col in 0..rows[r].len() {
                    let mut bad = doc.clone();
                    let MorphismSpec::Matrix(rows) = &mut bad.maps[m].components[c].morphism else { unreachable!() };
                    let x: Q = parse_q(&rows[r][col]).unwrap() + q(1);
                    rows[r][col] = format_q(&x);
                    let (i, p) = biproduct_legs(&bad);
                    assert!(!biproduct_equations_hold(&i, &p));
                    let (code, out) = run_cli(&["check-squares"], &format::emit(&bad));
                    assert_eq!(code, FAILS, "{out}");
                    assert!(out.contains("square fails at ("), "{out}");
                    flips += 1;
                }
            }
        }
    }
    assert!(flips > 0);
    format!("canonical legs pass; {flips}/{flips} single-entry perturbations fail with the square named")
}

// ---------------------------------------------------------------------------
// 4. Burnside averaging

fn average(rep: &[Matrix]) -> Matrix {
    let d = rep[0].rows();
    let mut sum = Matrix::zeros(d, d);
    for m in rep {
        sum = sum.add(m);
    }
    sum.scale(&(q(1) / q(rep.len() as i64)))
}

fn criterion_4(mult: Vec<Vec<usize>>, rep: Vec<Matrix>) -> String {
    let n = mult.len();
    let d = rep[0].rows();
    let name = if n == 2 { "burnside-c2" } else { "burnside-s3" };
    let text = example(name);
    let doc = format::parse_syntax(&text).unwrap();

    let (code, out) = run_cli(&["derive", "b-from-a"], &text);
    assert_eq!(code, HOLDS, "{out}");
    let fragment: Fragment = serde_json::from_str(&out[out.find('{').unwrap()..]).unwrap();
    let i_name = matrix_of(&fragment.maps[0].components[0].morphism);
    let k = i_name.rows() / d;
    let i = unname(k, d, i_name);
    let cocone = doc.maps.iter().find(|m| Some(&m.name) == doc.tasks[0].cocone.as_ref()).unwrap();
    let p = unname(d, k, matrix_of(&cocone.components[0].morphism));
    assert_eq!(i.mul(&p), average(&rep), "i p is not the averaging matrix");
    assert_eq!(p.mul(&i), Matrix::identity(k));

    let (code, out) = run_cli(&["check-adjunction"], &text);
    assert_eq!(code, HOLDS, "{out}");
    // the counit picks (1/|G|) Σ g, and that element is idempotent
    let eps = matrix_of(&doc.adjunctions[0].counit[0].morphism);
    let w = q(1) / q(n as i64);
    assert_eq!(eps, Matrix::from_rows(n, 1, vec![w; n]));
    let left = doc.profunctors.iter().find(|m| m.name == doc.adjunctions[0].left).unwrap();
    let algebra = doc.categories.iter().find(|c| c.name == left.target).unwrap();
    let mu = matrix_of(&algebra.compositions[0].morphism);
    assert_eq!(mu.mul(&eps.kron(&eps)), eps, "e e != e");
    // and the product really is the group law
    for f in 0..n {
        for g in 0..n {
            let (mut ef, mut eg) = (Matrix::zeros(n, 1), Matrix::zeros(n, 1));
            ef.set(f, 0, q(1));
            eg.set(g, 0, q(1));
            let prod = mu.mul(&ef.kron(&eg));
            assert!((0..n).all(|h| *prod.get(h, 0) == q((h == mult[f][g]) as i64)));
        }
    }

    let heavy = instances::burnside_weighted(&mult, &rep, &q(1)).unwrap();
    let (code, out) = run_cli(&["check-adjunction"], &format::emit(&format::fixture_document(&heavy)));
    assert_eq!(code, FAILS, "{out}");
    assert!(out.contains("triangle identity"), "{out}");
    format!("|G| = {n}: i p = average, e e = e, weight 1 breaks a triangle")
}

// ---------------------------------------------------------------------------
// 5. duality

fn criterion_5() -> String {
    let mut cases = Vec::new();
    for fx in instances::all().unwrap() {
        if let Some(p) = fx.perturbed().unwrap() {
            cases.push(p);
        }
        cases.push(fx);
    }
    let (mut holds, mut fails) = (0, 0);
    for fx in &cases {
        let (lim, out) = run_cli(&["check-limit"], &format::emit(&format::fixture_document(fx)));
        let dual = fx.limit().dual().unwrap();
        let (col, dout) = run_cli(&["check-colimit"], &format::emit(&format::colimit_document(&fx.name, &dual)));
        assert!(lim == HOLDS || lim == FAILS, "{}: {out}", fx.name);
        assert_eq!(lim, col, "{}:\n{out}{dout}", fx.name);
        if lim == HOLDS {
            holds += 1;
        } else {
            fails += 1;
        }
    }
    format!("{} fixtures and variants agree ({holds} limits, {fails} not)", cases.len())
}

// ---------------------------------------------------------------------------
// 6. calculus health

const CASES_PER_BASE: usize = 500;

struct Gen {
    rng: ChaCha8Rng,
    lattices: Vec<Lattice>,
    homs: HashMap<(BaseObject, BaseObject), Vec<BaseMorphism>>,
}

impl Gen {
    fn object(&mut self, tag: BaseTag, max: usize) -> BaseObject {
        match tag {
            BaseTag::FinSet => BaseObject::finset(self.rng.gen_range(0..=max)),
            BaseTag::Pointed => BaseObject::pointed(self.rng.gen_range(1..=max)).unwrap(),
            BaseTag::MatQ => BaseObject::matq(self.rng.gen_range(0..=max)),
            BaseTag::SupLat => {
                let fit: Vec<&Lattice> = self.lattices.iter().filter(|l| l.size() <= max).collect();
                BaseObject::suplat(fit[self.rng.gen_range(0..fit.len())].clone())
            }
        }
    }

    /// A uniformly random morphism, if there is one.
    fn morphism(&mut self, dom: &BaseObject, cod: &BaseObject) -> Option<BaseMorphism> {
        let (n, m) = (dom.size(), cod.size());
        match dom {
            BaseObject::FinSet(_) => {
                if m == 0 && n > 0 {
                    return None;
                }
                let t = (0..n).map(|_| self.rng.gen_range(0..m)).collect();
                Some(BaseMorphism::from_table(dom.clone(), cod.clone(), t).unwrap())
            }
            BaseObject::Pointed(_) => {
                let t = (0..n).map(|x| if x == 0 { 0 } else { self.rng.gen_range(0..m) }).collect();
                Some(BaseMorphism::from_table(dom.clone(), cod.clone(), t).unwrap())
            }
            BaseObject::MatQ(_) => {
                let e = (0..n * m).map(|_| q(self.rng.gen_range(-3..=3))).collect();
                Some(BaseMorphism::from_matrix(dom.clone(), cod.clone(), Matrix::from_rows(m, n, e)).unwrap())
            }
            BaseObject::SupLat(_) => {
                let all = self
                    .homs
                    .entry((dom.clone(), cod.clone()))
                    .or_insert_with(|| base::enumerate_morphisms(dom, cod, 1 << 16).unwrap());
                Some(all[self.rng.gen_range(0..all.len())].clone())
            }
        }
    }
}

fn id(x: &BaseObject) -> BaseMorphism {
    BaseMorphism::identity(x)
}

fn t(f: &BaseMorphism, g: &BaseMorphism) -> BaseMorphism {
    base::tensor_mor(f, g).unwrap()
}

fn currying_case(g: &mut Gen, tag: BaseTag) {
    let (a, x, b) = (g.object(tag, 3), g.object(tag, 3), g.object(tag, 3));
    if let Some(f) = g.morphism(&base::tensor_obj(&a, &x).unwrap(), &b) {
        let c = base::curry_left(&a, &x, &f).unwrap();
        assert_eq!(base::uncurry_left(&a, &b, &c).unwrap(), f);
        assert_eq!(t(&id(&a), &c).then(&base::eval_left(&a, &b).unwrap()).unwrap(), f);
        // transposition is natural in x
        let x2 = g.object(tag, 2);
        if let Some(h) = g.morphism(&x2, &x) {
            let pre = t(&id(&a), &h).then(&f).unwrap();
            assert_eq!(base::curry_left(&a, &x2, &pre).unwrap(), h.then(&c).unwrap());
        }
    }
    if let Some(f) = g.morphism(&base::tensor_obj(&x, &a).unwrap(), &b) {
        let c = base::curry_right(&x, &a, &f).unwrap();
        assert_eq!(base::uncurry_right(&a, &b, &c).unwrap(), f);
        assert_eq!(t(&c, &id(&a)).then(&base::eval_right(&a, &b).unwrap()).unwrap(), f);
    }
}

fn coequalizer_case(g: &mut Gen, tag: BaseTag) {
    let (x, y, w) = (g.object(tag, 3), g.object(tag, 3), g.object(tag, 3));
    let (Some(f1), Some(f2)) = (g.morphism(&x, &y), g.morphism(&x, &y)) else { return };
    let (qo, qm) = base::coequalizer(&f1, &f2).unwrap();
    assert_eq!(f1.then(&qm).unwrap(), f2.then(&qm).unwrap());
    if let Some(k) = g.morphism(&qo, &w) {
        let h = qm.then(&k).unwrap();
        // existence, and uniqueness: the factorisation is the k we started from
        assert_eq!(base::factor_through_epi(&qm, &h).unwrap(), k);
    }
    if let Some(h) = g.morphism(&y, &w) {
        let coequalizes = f1.then(&h).unwrap() == f2.then(&h).unwrap();
        let factored = base::factor_through_epi(&qm, &h);
        assert_eq!(coequalizes, factored.is_ok());
        if let Ok(k) = factored {
            assert_eq!(qm.then(&k).unwrap(), h);
        }
    }
}

fn coherence_case(g: &mut Gen, tag: BaseTag) {
    let max = if tag == BaseTag::MatQ { 2 } else { 3 };
    let (a, b, c, d) = (g.object(tag, max), g.object(tag, max), g.object(tag, max), g.object(tag, 2));
    let tobj = |x: &BaseObject, y: &BaseObject| base::tensor_obj(x, y).unwrap();
    let alpha = |x: &BaseObject, y: &BaseObject, z: &BaseObject| base::associator(x, y, z).unwrap();
    let al = alpha(&a, &b, &c);
    assert!(al.then(&base::associator_inv(&a, &b, &c).unwrap()).unwrap().is_identity());
    assert!(base::left_unitor(&a).unwrap().then(&base::left_unitor_inv(&a).unwrap()).unwrap().is_identity());
    assert!(base::right_unitor(&a).unwrap().then(&base::right_unitor_inv(&a).unwrap()).unwrap().is_identity());
    let i = base::unit_obj(tag);
    let tri_l = t(&base::right_unitor(&a).unwrap(), &id(&b));
    let tri_r = alpha(&a, &i, &b).then(&t(&id(&a), &base::left_unitor(&b).unwrap())).unwrap();
    assert_eq!(tri_l, tri_r, "triangle");
    let top = alpha(&tobj(&a, &b), &c, &d).then(&alpha(&a, &b, &tobj(&c, &d))).unwrap();
    let bottom = base::compose_chain(&[
        &t(&al, &id(&d)),
        &alpha(&a, &tobj(&b, &c), &d),
        &t(&id(&a), &alpha(&b, &c, &d)),
    ])
    .unwrap();
    assert_eq!(top, bottom, "pentagon");
    let s = base::symmetry(&a, &b).unwrap();
    assert!(s.then(&base::symmetry(&b, &a).unwrap()).unwrap().is_identity());
    // naturality of the associator in each argument
    let (a2, b2, c2) = (g.object(tag, 2), g.object(tag, 2), g.object(tag, 2));
    if let (Some(f), Some(h), Some(k)) = (g.morphism(&a2, &a), g.morphism(&b2, &b), g.morphism(&c2, &c)) {
        let lhs = t(&t(&f, &h), &k).then(&al).unwrap();
        let rhs = alpha(&a2, &b2, &c2).then(&t(&f, &t(&h, &k))).unwrap();
        assert_eq!(lhs, rhs, "associator naturality");
    }
}

/// Every map out of `src` preserving binary joins and the bottom, into a
/// lattice of `size` elements given by its join and bottom; plain odometer.
fn sup_maps(src: &Lattice, size: usize, bottom: usize, join: &dyn Fn(usize, usize) -> usize) -> Vec<Vec<usize>> {
    let s = src.size();
    let src_bottom = (0..s).find(|&x| (0..s).all(|y| src.leq(x, y))).unwrap();
    let mut out = vec![];
    let mut table = vec![0; s];
    loop {
        let joins = (0..s).all(|x| (0..s).all(|y| table[src.join(x, y)] == join(table[x], table[y])));
        if joins && table[src_bottom] == bottom {
            out.push(table.clone());
        }
        let mut k = 0;
        loop {
            if k == s {
                return out;
            }
            table[k] += 1;
            if table[k] < size {
                break;
            }
            table[k] = 0;
            k += 1;
        }
    }
}

/// Bimorphisms `l × m -> n` counted as sup-maps `l -> [m, n]`, with `[m, n]`
/// the pointwise-ordered lattice of sup-maps `m -> n`.
fn bimorphisms_by_currying(l: &Lattice, m: &Lattice, n: &Lattice) -> usize {
    let n_bottom = (0..n.size()).find(|&x| (0..n.size()).all(|y| n.leq(x, y))).unwrap();
    let inner = sup_maps(m, n.size(), n_bottom, &|x, y| n.join(x, y));
    let position = |t: &[usize]| inner.iter().position(|h| h == t).expect("pointwise joins of sup-maps are sup-maps");
    let bottom = position(&vec![n_bottom; m.size()]);
    let join = |f: usize, g: usize| position(&(0..m.size()).map(|x| n.join(inner[f][x], inner[g][x])).collect::<Vec<_>>());
    sup_maps(l, inner.len(), bottom, &join).len()
}

fn criterion_6() -> String {
    let seed = seed();
    let mut g = Gen { rng: ChaCha8Rng::seed_from_u64(seed), lattices: small_lattices(4), homs: HashMap::new() };
    for tag in BaseTag::ALL {
        for _ in 0..CASES_PER_BASE {
            currying_case(&mut g, tag);
            coequalizer_case(&mut g, tag);
            coherence_case(&mut g, tag);
        }
    }
    let lats = small_lattices(4);
    let mut pairs = 0;
    for l in &lats {
        for m in &lats {
            for n in &lats {
                let (ol, om, on) = (BaseObject::suplat(l.clone()), BaseObject::suplat(m.clone()), BaseObject::suplat(n.clone()));
                let tensor = base::tensor_obj(&ol, &om).unwrap();
                let counted = base::enumerate_morphisms(&tensor, &on, 1 << 20).unwrap().len();
                assert_eq!(counted, bimorphisms_by_currying(l, m, n), "{l:?} ⊗ {m:?} -> {n:?}");
            }
            pairs += 1;
        }
    }
    format!(
        "{CASES_PER_BASE} cases x 3 laws x {} bases (seed {seed}); {pairs} lattice pairs x {} targets certified",
        BaseTag::ALL.len(),
        lats.len()
    )
}

// ---------------------------------------------------------------------------

fn main() {
    let criteria: Vec<(&str, u64, Box<dyn Fn() -> String>)> = vec![
        ("1 bijection audit on the idempotent", 5, Box::new(criterion_1)),
        ("2 check-colimit agrees with the oracle", 60, Box::new(criterion_2)),
        ("3 biproduct squares and perturbations", 1, Box::new(criterion_3)),
        ("4a Burnside averaging, C2", 1, Box::new(|| criterion_4(instances::cyclic2().0, instances::cyclic2().1))),
        ("4b Burnside averaging, S3", 1, Box::new(|| criterion_4(instances::symmetric3().0, instances::symmetric3().1))),
        ("5 limit/colimit duality", 10, Box::new(criterion_5)),
        ("6 calculus health", 120, Box::new(criterion_6)),
    ];
    panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (name, limit, check) in &criteria {
        let start = Instant::now();
        let outcome = panic::catch_unwind(AssertUnwindSafe(check));
        let took = start.elapsed();
        let budget = Duration::from_secs(*limit);
        let (ok, detail) = match outcome {
            Ok(detail) if took < budget => (true, detail),
            Ok(detail) => (false, format!("{detail}; over the {limit} s budget")),
            Err(e) => {
                let msg = e
                    .downcast_ref::<String>()
                    .cloned()
                    .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                    .unwrap_or_else(|| "panicked".into());
                (false, msg)
            }
        };
        if !ok {
            failed += 1;
        }
        println!(
            "criterion {name}: {} in {:.3} s (limit {limit} s): {detail}",
            if ok { "PASS" } else { "FAIL" },
            took.as_secs_f64()
        );
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
