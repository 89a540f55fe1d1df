//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if
//! any criterion fails.

mod common;
mod oracle;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use nanokh::bracket::{bracket, bracket_general, jhat_q, jones};
use nanokh::homotopy::{applicable_moves, apply_move, random_walk, HomotopyData, WalkOptions, DEFAULT_LETTER_BUDGET};
use nanokh::khovanov::{ChainComplex, KhTable, DEFAULT_MAX_LETTERS};
use nanokh::smoothing::{resolve_in_order, State};
use nanokh::ul::{u_l, Crs};
use nanokh::{homology, LaurentPoly, LetterId, Nanophrase, Var};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use common::{corpus, p1, p2, phrase, pseudolink, worked_examples};

type Outcome = (bool, String);

fn q_poly(terms: &[(i32, i64)]) -> LaurentPoly {
    LaurentPoly::from_terms(Var::Q, terms)
}

fn distinguishing_pair() -> Outcome {
    let (a, b) = (p1(), p2());
    let (ja, jb) = (jhat_q(&a).unwrap(), jhat_q(&b).unwrap());
    let (ka, kb) = (homology(&a).unwrap(), homology(&b).unwrap());
    let pass = ja == jb && ka.get(-7, 15) == 0 && kb.get(-7, 15) == 1;
    let detail = format!(
        "jhat_q equal: {}; KH^{{-7,15}}: P1 {}, P2 {} (expected 0, 1); KH^{{-7,-15}}: P1 {}, P2 {}",
        ja == jb,
        ka.get(-7, 15),
        kb.get(-7, 15),
        ka.get(-7, -15),
        kb.get(-7, -15)
    );
    (pass, detail)
}

fn two_letter_alphabet_phrase(alphabet: &str, letters: &[(&str, &str)], words: &str) -> Nanophrase {
    let mut text = alphabet.to_string();
    for (n, s) in letters {
        text += &format!("letter {n} {s}\n");
    }
    text += &format!("phrase {words}\n");
    phrase(&text)
}

fn lambda_example() -> Outcome {
    let head = "alphabet a b\ninv a b\n";
    let acac = two_letter_alphabet_phrase(head, &[("A", "a"), ("C", "a")], "ACAC");
    let abacbc = two_letter_alphabet_phrase(head, &[("A", "a"), ("B", "b"), ("C", "a")], "ABACBC");
    let crs = Crs::default_for(acac.alphabet());
    let l = crs.subset(&["a"]).unwrap();
    let x = homology(&u_l(&acac, &l, &crs).unwrap()).unwrap().get(0, 2);
    let y = homology(&u_l(&abacbc, &l, &crs).unwrap()).unwrap().get(0, 2);
    (x == 0 && y == 1, format!("KH^{{0,2}}: U_L(ACAC) {x} (expected 0), U_L(ABACBC) {y} (expected 1)"))
}

fn fv_example() -> Outcome {
    let head = "alphabet a c\ninv a c\n";
    let empty = two_letter_alphabet_phrase(head, &[], "_");
    let word = two_letter_alphabet_phrase(head, &[("A", "a"), ("B", "a"), ("C", "c"), ("D", "c")], "ABCDCDAB");
    let crs = Crs::with_choices(word.alphabet(), &["c"]).unwrap();
    let l = crs.subset(&["c"]).unwrap();
    let ue = u_l(&empty, &l, &crs).unwrap();
    let uw = u_l(&word, &l, &crs).unwrap();
    let x = homology(&ue).unwrap().get(0, 3);
    let kw = homology(&uw).unwrap();
    let y = kw.get(0, 3);
    (
        x == 0 && y == 1,
        format!(
            "KH^{{0,3}}: U_L(empty) {x} (expected 0), U_L(ABCDCDAB) {y} (expected 1); U_L signs {:?}, KH^{{1,3}} = {}",
            uw.signs().unwrap(),
            kw.get(1, 3)
        ),
    )
}

struct ComplexCheck {
    square_zero: bool,
    euler: bool,
}

fn complex_corpus() -> Vec<Nanophrase> {
    let mut v = worked_examples();
    v.extend(corpus(0x5eed_0004, 200, 8, 3));
    v
}

fn check_complex(p: &Nanophrase) -> ComplexCheck {
    let c = ChainComplex::build(p, DEFAULT_MAX_LETTERS).unwrap();
    let square_zero = c.check_square_zero().is_ok();
    let h = c.homology();
    let j = jhat_q(p).unwrap();
    let euler = c.euler_characteristic() == j && h.euler_characteristic() == j;
    ComplexCheck { square_zero, euler }
}

fn square_zero(checks: &[ComplexCheck]) -> Outcome {
    let bad = checks.iter().filter(|c| !c.square_zero).count();
    (bad == 0, format!("{} phrases, {bad} with d∘d ≠ 0", checks.len()))
}

fn euler_identity(checks: &[ComplexCheck]) -> Outcome {
    let bad = checks.iter().filter(|c| !c.euler).count();
    (bad == 0, format!("{} phrases, {bad} violating the identity", checks.len()))
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for k in 0..=p.len() {
            let mut q = p.clone();
            q.insert(k, n - 1);
            out.push(q);
        }
    }
    out
}

/// Every state of `p` resolved under every deletion order agrees with the
/// first order and with the union-find oracle.
fn order_independent(p: &Nanophrase) -> bool {
    let n = p.letter_count();
    let orders = permutations(n);
    (0..1u64 << n).all(|m| {
        let s = State::from_mask(m, n).unwrap();
        let ids = |o: &Vec<usize>| -> Vec<LetterId> { o.iter().map(|&k| LetterId(k)).collect() };
        let first = resolve_in_order(p, s, &ids(&orders[0])).unwrap();
        let arcs: Vec<Vec<usize>> = first.components().iter().map(|c| c.arcs().to_vec()).collect();
        arcs == oracle::components(p, m) && orders[1..].iter().all(|o| resolve_in_order(p, s, &ids(o)).unwrap() == first)
    })
}

const SKELETONS: [&str; 8] =
    ["AxAyBzBt", "AxByAzBt", "AxAy|BzBt", "AxBy|AzBt", "Ax|AyBzBt", "Ax|Ay|BzBt", "Ax|By|AzBt", "Ax|Ay|Bz|Bt"];

/// Distinct orderings of `CCDD…` for `extra` letters.
fn arrangements(extra: usize) -> Vec<Vec<char>> {
    fn go(counts: &mut [usize], cur: &mut Vec<char>, out: &mut Vec<Vec<char>>) {
        if counts.iter().all(|&c| c == 0) {
            out.push(cur.clone());
            return;
        }
        for k in 0..counts.len() {
            if counts[k] > 0 {
                counts[k] -= 1;
                cur.push((b'C' + k as u8) as char);
                go(counts, cur, out);
                cur.pop();
                counts[k] += 1;
            }
        }
    }
    let mut out = Vec::new();
    go(&mut vec![2; extra], &mut Vec::new(), &mut out);
    out
}

/// Ways of cutting `len` items into four consecutive slots.
fn compositions(len: usize) -> Vec<[usize; 4]> {
    let mut out = Vec::new();
    for a in 0..=len {
        for b in 0..=len - a {
            for c in 0..=len - a - b {
                out.push([a, b, c, len - a - b - c]);
            }
        }
    }
    out
}

fn instantiate(skeleton: &str, fill: &[char], cut: [usize; 4]) -> String {
    let mut parts = Vec::new();
    let mut start = 0;
    for c in cut {
        parts.push(fill[start..start + c].iter().collect::<String>());
        start += c;
    }
    let mut s = String::new();
    for ch in skeleton.chars() {
        match ch {
            'x' => s += &parts[0],
            'y' => s += &parts[1],
            'z' => s += &parts[2],
            't' => s += &parts[3],
            c => s.push(c),
        }
    }
    s.split('|').map(|w| if w.is_empty() { "_" } else { w }).collect::<Vec<_>>().join("|")
}

fn shape_words(extra: usize) -> Vec<String> {
    let mut out = Vec::new();
    for sk in SKELETONS {
        for fill in arrangements(extra) {
            for cut in compositions(fill.len()) {
                out.push(instantiate(sk, &fill, cut));
            }
        }
    }
    out
}

fn all_signs(n: usize) -> Vec<Vec<i8>> {
    (0..1u32 << n).map(|m| (0..n).map(|k| if m >> k & 1 == 1 { 1 } else { -1 }).collect()).collect()
}

fn order_independence() -> Outcome {
    // Exhaustive over projections for 2 to 4 letters.
    let mut phrases: Vec<Nanophrase> = Vec::new();
    for extra in 0..=2 {
        for w in shape_words(extra) {
            for s in all_signs(2 + extra) {
                phrases.push(pseudolink(&w, &s));
            }
        }
    }
    let exhaustive = phrases.len();
    // Seeded sample of 5-letter instantiations.
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0006);
    let five = shape_words(3);
    let signs = all_signs(5);
    for _ in 0..200 {
        phrases.push(pseudolink(five.choose(&mut rng).unwrap(), signs.choose(&mut rng).unwrap()));
    }
    let random = corpus(0x5eed_0066, 100, 6, 3);
    let total = phrases.len() + random.len();
    let bad = phrases.par_iter().chain(random.par_iter()).filter(|p| !order_independent(p)).count();
    (
        bad == 0,
        format!("{total} phrases ({exhaustive} exhaustive shape instances), {bad} order-dependent"),
    )
}

#[derive(PartialEq)]
struct Invariants {
    jones: LaurentPoly,
    jhat_q: LaurentPoly,
    kh: KhTable,
}

fn invariants(p: &Nanophrase) -> Invariants {
    Invariants { jones: jones(p).unwrap(), jhat_q: jhat_q(p).unwrap(), kh: homology(p).unwrap() }
}

fn move_invariance() -> Outcome {
    let h = HomotopyData::s1();
    let seeds = [pseudolink("ABAB", &[1, 1]), pseudolink("ABACBC", &[-1, -1, -1]), p1()];
    let results: Vec<Result<usize, String>> = (0..100u64)
        .into_par_iter()
        .map(|k| {
            let start = &seeds[k as usize % seeds.len()];
            let expected = invariants(start);
            let opts = WalkOptions { steps: 30, seed: k, allow_shifts: true, letter_budget: DEFAULT_LETTER_BUDGET };
            let (_, log) = random_walk(start, &h, opts);
            let mut cur = start.clone();
            for (i, m) in log.iter().enumerate() {
                cur = apply_move(&cur, m, &h).unwrap();
                if invariants(&cur) != expected {
                    return Err(format!("walk {k} step {}: {m} on {}", i + 1, cur.phrase_string()));
                }
            }
            Ok(log.len())
        })
        .collect();
    let moves: usize = results.iter().filter_map(|r| r.as_ref().ok()).sum();
    let failures: Vec<&String> = results.iter().filter_map(|r| r.as_ref().err()).collect();
    match failures.first() {
        None => (true, format!("100 walks, {moves} moves, every step preserved jones, jhat_q, KH")),
        Some(f) => (false, format!("{} walks changed an invariant; first: {f}", failures.len())),
    }
}

fn bracket_specialization() -> Outcome {
    let h = HomotopyData::s1();
    let cases = [
        pseudolink("ABBA", &[1, -1]),
        pseudolink("ABBA", &[-1, 1]),
        pseudolink("CABBAC", &[1, 1, -1]),
        pseudolink("ABBAC|C", &[-1, 1, 1]),
        pseudolink("CDABBADC", &[1, -1, -1, 1]),
    ];
    let mut moves = 0;
    for p in &cases {
        for m in applicable_moves(p, &h).into_iter().filter(|m| m.kind_name() == "H2") {
            let q = apply_move(p, &m, &h).unwrap();
            moves += 1;
            if bracket_general(p).unwrap() == bracket_general(&q).unwrap() {
                return (false, format!("general bracket unchanged by {m} on {}", p.phrase_string()));
            }
            if bracket(p).unwrap() != bracket(&q).unwrap() {
                return (false, format!("specialized bracket changed by {m} on {}", p.phrase_string()));
            }
        }
    }
    (moves >= cases.len(), format!("{moves} H2 moves on {} phrases", cases.len()))
}

fn base_cases() -> Outcome {
    let e = pseudolink("_", &[]);
    let j = jhat_q(&e).unwrap();
    let kh = homology(&e).unwrap();
    let want = KhTable::from_entries([((0, -1), 1), ((0, 1), 1)]);
    let mut states: Vec<(i32, i32)> = oracle::enhanced(&e).iter().map(|s| (s.i, s.j)).collect();
    states.sort();
    let o = oracle::homology(&e);
    let pass = j == q_poly(&[(1, 1), (-1, 1)])
        && kh == want
        && states == [(0, -1), (0, 1)]
        && &o.table == want.entries();
    (pass, format!("jhat_q = {j}; KH = {:?}; oracle states {states:?}", kh.entries()))
}

fn run(n: usize, name: &str, budget: Duration, f: impl FnOnce() -> Outcome) -> bool {
    let start = Instant::now();
    let (mut pass, mut detail) = match catch_unwind(AssertUnwindSafe(f)) {
        Ok(o) => o,
        Err(e) => {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            (false, format!("panicked: {msg}"))
        }
    };
    let t = start.elapsed();
    if t > budget {
        pass = false;
        detail += &format!("; exceeded {budget:?}");
    }
    println!("{} criterion {n} ({name}): {detail} [{:.2} s]", if pass { "PASS" } else { "FAIL" }, t.as_secs_f64());
    pass
}

fn main() -> ExitCode {
    let s = Duration::from_secs;
    let mut ok = true;
    ok &= run(1, "distinguishing pair", s(5), distinguishing_pair);
    ok &= run(2, "λ-independence example", s(1), lambda_example);
    ok &= run(3, "f∘v₊-independence example", s(1), fv_example);
    let start = Instant::now();
    let checks: Vec<ComplexCheck> = complex_corpus().par_iter().map(check_complex).collect();
    let shared = start.elapsed();
    ok &= run(4, "d∘d = 0", s(30).saturating_sub(shared), || square_zero(&checks));
    ok &= run(5, "Euler identity", s(30).saturating_sub(shared), || euler_identity(&checks));
    ok &= run(6, "order independence", s(60), order_independence);
    ok &= run(7, "move invariance", s(120), move_invariance);
    ok &= run(8, "bracket specialization", s(1), bracket_specialization);
    ok &= run(9, "base cases", s(1), base_cases);
    println!("shared complex corpus for criteria 4 and 5: {:.2} s", shared.as_secs_f64());
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
