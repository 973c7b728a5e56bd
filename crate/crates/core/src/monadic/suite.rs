//! Diagram suites: a small text format, the built-in exhaustive suite, and
//! the verification driver.
//!
//! ```text
//! # comments start with '#'
//! algebra A free a b          # all subsets of {a, b}
//! algebra C chain 3           # c0 < c1 < c2
//! algebra T table             # explicit carrier; the first element is the bottom
//!   elements 0 p q 1
//!   join p q 1
//! end
//! diagram square
//!   object A
//!   object C
//!   arrow 0 1 {a}->c1 {b}->c2  # images of generators, extended by joins
//! end
//! tensor C 2
//! ```

use std::collections::{BTreeSet, HashMap};
use std::fmt::Write as _;

use serde::Serialize;

use super::colimit::{
    colimit_coequalizer_pair, colimit_direct, colimit_via_coequalizer, tensor_coequalizer_pair, tensor_via_coequalizer,
    AlgebraDiagram, Arrow,
};
use super::semilattice::{iso_check, Semilattice};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Default)]
pub struct Suite {
    pub algebras: Vec<(String, Semilattice)>,
    pub diagrams: Vec<(String, AlgebraDiagram)>,
    /// Algebra name and the size of the set to tensor with.
    pub tensors: Vec<(String, usize)>,
}

impl Suite {
    pub fn algebra(&self, name: &str) -> Option<&Semilattice> {
        self.algebras.iter().find(|(n, _)| n == name).map(|(_, a)| a)
    }
}

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse { line, message: message.into() }
}

/// Parses the suite text format. Errors carry 1-based line numbers.
pub fn parse_suite(text: &str) -> Result<Suite> {
    let mut suite = Suite::default();
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());
    while let Some((ln, line)) = lines.next() {
        let words: Vec<&str> = line.split_whitespace().collect();
        match words[0] {
            "algebra" => {
                let (name, kind) = match words.as_slice() {
                    [_, name, kind, ..] => (*name, *kind),
                    _ => return Err(parse_err(ln, "expected `algebra NAME free|chain|table ...`")),
                };
                if suite.algebra(name).is_some() {
                    return Err(parse_err(ln, format!("algebra `{name}` defined twice")));
                }
                let alg = match kind {
                    "free" => Semilattice::free(&words[3..]),
                    "chain" => {
                        let n = words.get(3).and_then(|w| w.parse().ok()).ok_or_else(|| parse_err(ln, "chain needs a length"))?;
                        Semilattice::chain(n)
                    }
                    "table" => parse_table(ln, &mut lines),
                    other => return Err(parse_err(ln, format!("unknown algebra kind `{other}`"))),
                }
                .map_err(|e| match e {
                    Error::Parse { .. } => e,
                    other => parse_err(ln, other.to_string()),
                })?;
                suite.algebras.push((name.to_string(), alg));
            }
            "diagram" => {
                let name = words.get(1).ok_or_else(|| parse_err(ln, "diagram needs a name"))?.to_string();
                let d = parse_diagram(ln, &suite, &mut lines)?;
                suite.diagrams.push((name, d));
            }
            "tensor" => {
                let [_, name, n] = words.as_slice() else {
                    return Err(parse_err(ln, "expected `tensor ALGEBRA SIZE`"));
                };
                if suite.algebra(name).is_none() {
                    return Err(parse_err(ln, format!("unknown algebra `{name}`")));
                }
                let n = n.parse().map_err(|_| parse_err(ln, format!("bad set size `{n}`")))?;
                suite.tensors.push((name.to_string(), n));
            }
            other => return Err(parse_err(ln, format!("unexpected `{other}`"))),
        }
    }
    Ok(suite)
}

fn parse_table<'a>(start: usize, lines: &mut impl Iterator<Item = (usize, &'a str)>) -> Result<Semilattice> {
    let mut labels: Vec<String> = Vec::new();
    let mut entries: Vec<(usize, String, String, String)> = Vec::new();
    let end = loop {
        let Some((ln, line)) = lines.next() else {
            return Err(parse_err(start, "table without `end`"));
        };
        let words: Vec<&str> = line.split_whitespace().collect();
        match words.as_slice() {
            ["end"] => break ln,
            ["elements", rest @ ..] => labels.extend(rest.iter().map(|s| s.to_string())),
            ["join", a, b, c] => entries.push((ln, a.to_string(), b.to_string(), c.to_string())),
            _ => return Err(parse_err(ln, "expected `elements ...`, `join X Y Z` or `end`")),
        }
    };
    if labels.is_empty() {
        return Err(parse_err(start, "table has no elements"));
    }
    let n = labels.len();
    let idx: HashMap<&str, usize> = labels.iter().enumerate().map(|(i, l)| (l.as_str(), i)).collect();
    let mut table: Vec<Vec<Option<usize>>> = vec![vec![None; n]; n];
    for i in 0..n {
        table[i][i] = Some(i);
        table[0][i] = Some(i);
        table[i][0] = Some(i);
    }
    for (ln, a, b, c) in &entries {
        let get = |s: &str| idx.get(s).copied().ok_or_else(|| parse_err(*ln, format!("unknown element `{s}`")));
        let (a, b, c) = (get(a)?, get(b)?, get(c)?);
        for (x, y) in [(a, b), (b, a)] {
            if table[x][y].is_some_and(|v| v != c) {
                return Err(parse_err(*ln, format!("conflicting join for {} and {}", labels[x], labels[y])));
            }
            table[x][y] = Some(c);
        }
    }
    let mut full = vec![vec![0; n]; n];
    for i in 0..n {
        for j in 0..n {
            full[i][j] = table[i][j]
                .ok_or_else(|| parse_err(end, format!("join of {} and {} is not given", labels[i], labels[j])))?;
        }
    }
    Semilattice::new(labels, full).map_err(|e| parse_err(end, e.to_string()))
}

fn parse_diagram<'a>(
    start: usize,
    suite: &Suite,
    lines: &mut impl Iterator<Item = (usize, &'a str)>,
) -> Result<AlgebraDiagram> {
    let mut objects: Vec<Semilattice> = Vec::new();
    let mut arrows = Vec::new();
    loop {
        let Some((ln, line)) = lines.next() else {
            return Err(parse_err(start, "diagram without `end`"));
        };
        let words: Vec<&str> = line.split_whitespace().collect();
        match words.as_slice() {
            ["end"] => break,
            ["object", name] => {
                let a = suite.algebra(name).ok_or_else(|| parse_err(ln, format!("unknown algebra `{name}`")))?;
                objects.push(a.clone());
            }
            ["arrow", s, t, maps @ ..] => {
                let index = |w: &str| -> Result<usize> {
                    w.parse::<usize>()
                        .ok()
                        .filter(|&i| i < objects.len())
                        .ok_or_else(|| parse_err(ln, format!("`{w}` is not a declared object index")))
                };
                let (s, t) = (index(s)?, index(t)?);
                let (src, tgt) = (&objects[s], &objects[t]);
                let mut assignments = Vec::new();
                for m in maps {
                    let (x, y) = m.split_once("->").ok_or_else(|| parse_err(ln, format!("expected `x->y`, got `{m}`")))?;
                    let xi = src.index_of(x).ok_or_else(|| parse_err(ln, format!("`{x}` is not in the source")))?;
                    let yi = tgt.index_of(y).ok_or_else(|| parse_err(ln, format!("`{y}` is not in the target")))?;
                    assignments.push((xi, yi));
                }
                let map = src.hom_from_generators(tgt, &assignments).map_err(|e| parse_err(ln, e.to_string()))?;
                arrows.push(Arrow { source: s, target: t, map });
            }
            _ => return Err(parse_err(ln, "expected `object NAME`, `arrow I J x->y ...` or `end`")),
        }
    }
    AlgebraDiagram::new(objects, arrows).map_err(|e| parse_err(start, e.to_string()))
}

/// Writes a suite in the text format; arrows list every element's image.
pub fn render_suite(suite: &Suite) -> String {
    let mut out = String::new();
    let mut names: HashMap<Vec<String>, String> = HashMap::new();
    for (name, a) in &suite.algebras {
        names.insert(a.labels().to_vec(), name.clone());
        writeln!(out, "algebra {name} table").unwrap();
        writeln!(out, "  elements {}", a.labels().join(" ")).unwrap();
        let b = a.bottom();
        for i in 0..a.len() {
            for j in i + 1..a.len() {
                if i != b && j != b {
                    writeln!(out, "  join {} {} {}", a.label(i), a.label(j), a.label(a.join(i, j))).unwrap();
                }
            }
        }
        writeln!(out, "end").unwrap();
    }
    for (name, d) in &suite.diagrams {
        writeln!(out, "diagram {name}").unwrap();
        for o in d.objects() {
            let n = suite
                .algebras
                .iter()
                .find(|(_, a)| a == o)
                .map(|(n, _)| n.clone())
                .expect("diagram objects are registered algebras");
            writeln!(out, "  object {n}").unwrap();
        }
        for a in d.arrows() {
            let (src, tgt) = (&d.objects()[a.source], &d.objects()[a.target]);
            let maps: Vec<String> =
                a.map.iter().enumerate().map(|(x, &y)| format!("{}->{}", src.label(x), tgt.label(y))).collect();
            writeln!(out, "  arrow {} {} {}", a.source, a.target, maps.join(" ")).unwrap();
        }
        writeln!(out, "end").unwrap();
    }
    for (name, n) in &suite.tensors {
        writeln!(out, "tensor {name} {n}").unwrap();
    }
    out
}

/// The algebras used by the built-in suite.
pub fn algebra_pool() -> Vec<(String, Semilattice)> {
    let l = |v: &[&str]| v.iter().map(|s| s.to_string()).collect::<Vec<_>>();
    // M3: three atoms with a common top.
    let m3 = Semilattice::new(
        l(&["0", "a", "b", "c", "1"]),
        (0..5).map(|i| (0..5).map(|j| if i == j || j == 0 { i } else if i == 0 { j } else { 4 }).collect()).collect(),
    )
    .expect("M3");
    // N5: 0 < a < b < 1 and 0 < c < 1.
    let n5 = {
        let rank = [0, 1, 2, 1, 3];
        let leq = |x: usize, y: usize| x == y || x == 0 || y == 4 || (x == 1 && y == 2);
        let table = (0..5)
            .map(|i| {
                (0..5)
                    .map(|j| (0..5).filter(|&k| leq(i, k) && leq(j, k)).min_by_key(|&k| rank[k]).expect("top"))
                    .collect()
            })
            .collect();
        Semilattice::new(l(&["0", "a", "b", "c", "1"]), table).expect("N5")
    };
    vec![
        ("one".into(), Semilattice::chain(1).unwrap()),
        ("two".into(), Semilattice::free(&["a"]).unwrap()),
        ("c3".into(), Semilattice::chain(3).unwrap()),
        ("c4".into(), Semilattice::chain(4).unwrap()),
        ("f2".into(), Semilattice::free(&["a", "b"]).unwrap()),
        ("m3".into(), m3),
        ("n5".into(), n5),
        ("f3".into(), Semilattice::free(&["a", "b", "c"]).unwrap()),
        ("f4".into(), Semilattice::free(&["a", "b", "c", "d"]).unwrap()),
    ]
}

/// Directed multigraphs with at most `max_objects` objects and
/// `max_arrows` arrows (loops allowed), one per isomorphism class.
pub fn shapes(max_objects: usize, max_arrows: usize) -> Vec<(usize, Vec<(usize, usize)>)> {
    fn multisets(pairs: &[(usize, usize)], start: usize, left: usize, cur: &mut Vec<(usize, usize)>, out: &mut Vec<Vec<(usize, usize)>>) {
        out.push(cur.clone());
        if left == 0 {
            return;
        }
        for i in start..pairs.len() {
            cur.push(pairs[i]);
            multisets(pairs, i, left - 1, cur, out);
            cur.pop();
        }
    }
    fn permutations(n: usize) -> Vec<Vec<usize>> {
        if n == 0 {
            return vec![Vec::new()];
        }
        let mut out = Vec::new();
        for p in permutations(n - 1) {
            for i in 0..=p.len() {
                let mut q = p.clone();
                q.insert(i, n - 1);
                out.push(q);
            }
        }
        out
    }
    let mut out = Vec::new();
    for n in 0..=max_objects {
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|s| (0..n).map(move |t| (s, t))).collect();
        let mut all = Vec::new();
        multisets(&pairs, 0, max_arrows, &mut Vec::new(), &mut all);
        let perms = permutations(n);
        let mut seen: BTreeSet<Vec<(usize, usize)>> = BTreeSet::new();
        for arrows in all {
            let canonical = perms
                .iter()
                .map(|p| {
                    let mut v: Vec<(usize, usize)> = arrows.iter().map(|&(s, t)| (p[s], p[t])).collect();
                    v.sort_unstable();
                    v
                })
                .min()
                .unwrap_or_default();
            if seen.insert(canonical.clone()) {
                out.push((n, canonical));
            }
        }
    }
    out
}

/// Largest coproduct in the built-in suite.
const SUITE_PRODUCT_BOUND: usize = 512;

/// Every shape with at most three objects and four arrows, each realised
/// with a few assignments of pool algebras and homomorphisms, plus tensors
/// of every pool algebra with sets of size one to three.
pub fn builtin_suite() -> Suite {
    let pool = algebra_pool();
    let mut suite = Suite { algebras: pool.clone(), ..Suite::default() };
    let mut hom_cache: HashMap<(usize, usize), Vec<Vec<usize>>> = HashMap::new();
    let mut counter = 0usize;
    for (shape_id, (n, arrows)) in shapes(3, 4).into_iter().enumerate() {
        let variants = if n == 0 { 1 } else { 3 };
        for v in 0..variants {
            // Walk the pool with a shape- and variant-dependent stride so the
            // suite covers many algebra combinations.
            let mut choice: Vec<usize> = (0..n).map(|k| (shape_id * 5 + v * 3 + k * 7 + v * k) % pool.len()).collect();
            while choice.iter().map(|&c| pool[c].1.len()).product::<usize>() > SUITE_PRODUCT_BOUND {
                let biggest = (0..n).max_by_key(|&k| pool[choice[k]].1.len()).expect("nonempty");
                choice[biggest] = (choice[biggest] + 1) % 4;
            }
            let mut built = Vec::new();
            for (a, &(s, t)) in arrows.iter().enumerate() {
                let homs = hom_cache
                    .entry((choice[s], choice[t]))
                    .or_insert_with(|| pool[choice[s]].1.homomorphisms(&pool[choice[t]].1, 64));
                let pick = (counter + a * 13 + v * 29) % homs.len();
                built.push(Arrow { source: s, target: t, map: homs[pick].clone() });
            }
            counter += 1;
            let objects = choice.iter().map(|&c| pool[c].1.clone()).collect();
            let d = AlgebraDiagram::new(objects, built).expect("homomorphisms from enumeration");
            suite.diagrams.push((format!("shape{shape_id}.{v}"), d));
        }
    }
    for (name, _) in &pool {
        for a in 1..=3 {
            suite.tensors.push((name.clone(), a));
        }
    }
    suite
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct MonadicReport {
    pub diagrams: usize,
    pub tensors: usize,
    pub reflexive_pairs: usize,
    pub failures: Vec<String>,
}

impl MonadicReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

fn check_diagram(name: &str, d: &AlgebraDiagram) -> std::result::Result<(), String> {
    let fail = |what: &str, e: Error| format!("{name}: {what}: {e}");
    let pair = colimit_coequalizer_pair(d).map_err(|e| fail("coequalizer pair", e))?;
    if !pair.is_reflexive() {
        return Err(format!("{name}: unit section fails e.h = id or f.h = id"));
    }
    let via = colimit_via_coequalizer(d).map_err(|e| fail("coequalizer", e))?;
    let direct = colimit_direct(d).map_err(|e| fail("direct colimit", e))?;
    if !iso_check(&via, &direct) {
        return Err(format!("{name}: coequalizer ({} elements) differs from direct colimit ({} elements)", via.len(), direct.len()));
    }
    Ok(())
}

fn check_tensor(name: &str, x: &Semilattice, a: usize) -> std::result::Result<(), String> {
    let label = format!("{name} (x) {a}");
    let pair = tensor_coequalizer_pair(x, a).map_err(|e| format!("{label}: {e}"))?;
    if !pair.is_reflexive() {
        return Err(format!("{label}: unit section fails e.h = id or f.h = id"));
    }
    let via = tensor_via_coequalizer(x, a).map_err(|e| format!("{label}: {e}"))?;
    let copower = colimit_direct(&AlgebraDiagram::discrete(x, a)).map_err(|e| format!("{label}: {e}"))?;
    if !iso_check(&via, &copower) {
        return Err(format!("{label}: coequalizer differs from the coproduct of copies"));
    }
    Ok(())
}

/// Runs every diagram and tensor of the suite, spreading diagrams over the
/// available cores.
pub fn verify_suite(suite: &Suite) -> MonadicReport {
    enum Job<'a> {
        Diagram(&'a str, &'a AlgebraDiagram),
        Tensor(&'a str, &'a Semilattice, usize),
    }
    let mut jobs: Vec<Job> = suite.diagrams.iter().map(|(n, d)| Job::Diagram(n, d)).collect();
    for (name, a) in &suite.tensors {
        match suite.algebra(name) {
            Some(x) => jobs.push(Job::Tensor(name, x, *a)),
            None => return MonadicReport { failures: vec![format!("tensor of unknown algebra `{name}`")], ..Default::default() },
        }
    }
    let threads = std::thread::available_parallelism().map_or(1, |n| n.get()).min(jobs.len().max(1));
    let results: Vec<Option<String>> = std::thread::scope(|scope| {
        let chunk = jobs.len().div_ceil(threads).max(1);
        let handles: Vec<_> = jobs
            .chunks(chunk)
            .map(|part| {
                scope.spawn(move || {
                    part.iter()
                        .map(|job| match job {
                            Job::Diagram(n, d) => check_diagram(n, d).err(),
                            Job::Tensor(n, x, a) => check_tensor(n, x, *a).err(),
                        })
                        .collect::<Vec<_>>()
                })
            })
            .collect();
        handles.into_iter().flat_map(|h| h.join().expect("suite worker panicked")).collect()
    });
    MonadicReport {
        diagrams: suite.diagrams.len(),
        tensors: suite.tensors.len(),
        reflexive_pairs: suite.diagrams.len() + suite.tensors.len(),
        failures: results.into_iter().flatten().collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const SAMPLE: &str = "\
# sample
algebra A free a b
algebra C chain 3
algebra T table
  elements 0 p q 1
  join p q 1
  join p 1 1
  join q 1 1
end
diagram square
  object A
  object C
  arrow 0 1 {a}->c1 {b}->c2
end
tensor C 2
";

    #[test]
    fn parses_sample() {
        let s = parse_suite(SAMPLE).unwrap();
        assert_eq!(s.algebras.len(), 3);
        assert_eq!(s.algebra("T").unwrap().len(), 4);
        assert_eq!(s.diagrams[0].1.arrows()[0].map, vec![0, 1, 2, 2]);
        assert_eq!(s.tensors, vec![("C".to_string(), 2)]);
        assert!(verify_suite(&s).passed());
    }

    #[test]
    fn parse_errors_have_line_numbers() {
        let err = parse_suite("algebra A free a\ndiagram d\n  object B\nend\n").unwrap_err();
        assert_eq!(err, Error::Parse { line: 3, message: "unknown algebra `B`".into() });
        let err = parse_suite("algebra T table\n  elements 0 p q\nend\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, .. }));
        let err = parse_suite("algebra A chain 2\ndiagram d\n object A\n arrow 0 0 c0->c1
end\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 4, .. }));
    }

    #[test]
    fn render_round_trip() {
        let s = parse_suite(SAMPLE).unwrap();
        let again = parse_suite(&render_suite(&s)).unwrap();
        assert_eq!(again.diagrams.len(), 1);
        assert_eq!(again.diagrams[0].1, s.diagrams[0].1);
    }

    #[test]
    fn shape_counts() {
        // One object, up to two arrows: no arrows, one loop, two loops.
        assert_eq!(shapes(1, 2).iter().filter(|(n, _)| *n == 1).count(), 3);
        // Two objects, one arrow: none, a loop, or an edge between them.
        assert_eq!(shapes(2, 1).iter().filter(|(n, _)| *n == 2).count(), 3);
    }
}
