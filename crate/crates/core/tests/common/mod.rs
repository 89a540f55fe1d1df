//! Phrase generators shared by the integration tests.
#![allow(dead_code)]

use nanokh::{parse_phrase, Alphabet, Nanophrase};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn phrase(text: &str) -> Nanophrase {
    parse_phrase(text).unwrap_or_else(|e| panic!("{text}: {e}"))
}

/// A pseudolink from a word string such as `AB|BA` and signs in letter
/// order of first appearance.
pub fn pseudolink(words: &str, signs: &[i8]) -> Nanophrase {
    let mut names: Vec<String> = Vec::new();
    for c in words.chars().filter(|c| c.is_ascii_uppercase()) {
        if !names.contains(&c.to_string()) {
            names.push(c.to_string());
        }
    }
    assert_eq!(names.len(), signs.len(), "{words}");
    let letters: Vec<(String, String)> = names.iter().zip(signs).map(|(n, s)| (n.clone(), s.to_string())).collect();
    let words: Vec<Vec<String>> = words
        .split('|')
        .map(|w| w.chars().filter(|c| *c != '_').map(|c| c.to_string()).collect())
        .collect();
    Nanophrase::from_names(Alphabet::pseudolink(), &letters, &words).unwrap()
}

/// A uniformly shuffled Gauss phrase with `letters` letters cut into
/// `words` words (possibly empty) with random signs.
pub fn random_pseudolink(rng: &mut ChaCha8Rng, letters: usize, words: usize) -> Nanophrase {
    let names: Vec<String> = (0..letters).map(|i| ((b'A' + i as u8) as char).to_string()).collect();
    let mut seq: Vec<String> = names.iter().chain(&names).cloned().collect();
    seq.shuffle(rng);
    let mut cuts: Vec<usize> = (0..words - 1).map(|_| rng.gen_range(0..=seq.len())).collect();
    cuts.sort();
    let mut ws = Vec::new();
    let mut start = 0;
    for c in cuts.into_iter().chain([seq.len()]) {
        ws.push(seq[start..c].to_vec());
        start = c;
    }
    let signs: Vec<(String, String)> =
        names.iter().map(|n| (n.clone(), if rng.gen_bool(0.5) { "1" } else { "-1" }.to_string())).collect();
    Nanophrase::from_names(Alphabet::pseudolink(), &signs, &ws).unwrap()
}

/// `count` random phrases with up to `max_letters` letters and up to
/// `max_words` words.
pub fn corpus(seed: u64, count: usize, max_letters: usize, max_words: usize) -> Vec<Nanophrase> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let n = rng.gen_range(0..=max_letters);
            let k = rng.gen_range(1..=max_words);
            random_pseudolink(&mut rng, n, k)
        })
        .collect()
}

pub fn p1() -> Nanophrase {
    pseudolink("ABCDEABCDE", &[-1; 5])
}

pub fn p2() -> Nanophrase {
    // B, D, F positive; first appearance order is A..J.
    pseudolink("ABCDEFBGDHFIJEHCGAIJ", &[-1, 1, -1, 1, -1, 1, -1, -1, -1, -1])
}

/// Worked examples used across the suites.
pub fn worked_examples() -> Vec<Nanophrase> {
    vec![
        pseudolink("_", &[]),
        pseudolink("_|_", &[]),
        pseudolink("AA", &[1]),
        pseudolink("AA", &[-1]),
        pseudolink("ABAB", &[1, 1]),
        pseudolink("ABAB", &[1, -1]),
        pseudolink("ABBA", &[1, -1]),
        pseudolink("ACAC", &[1, 1]),
        pseudolink("ABACBC", &[1, -1, 1]),
        pseudolink("ABACBC", &[-1, -1, -1]),
        pseudolink("ABCDCDAB", &[-1, -1, 1, 1]),
        pseudolink("ABCABC", &[1, -1, 1]),
        pseudolink("AB|AB", &[1, 1]),
        pseudolink("ABCAB|C", &[1, -1, 1]),
        p1(),
        p2(),
    ]
}
