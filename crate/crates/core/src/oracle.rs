//! Brute-force reference implementations, used only by tests and
//! verification reports.
//!
//! These are deliberately naive breadth-first searches over generator
//! products and share nothing with the graph or automaton code beyond free
//! reduction. A depth-bounded search can in principle miss long products that
//! happen to be short words; callers choose the spec generously and the test
//! suite re-runs with enlarged bounds to confirm saturation.

use std::collections::BTreeSet;

use crate::word::Word;

/// Bounds for a brute-force search: final word length and the number of
/// generator factors.
#[derive(Clone, Copy, Debug)]
pub struct BallSpec {
    pub max_len: usize,
    pub max_depth: usize,
}

const MAX_ELEMENTS: usize = 4_000_000;

fn generator_set(generators: &[Word]) -> Vec<Word> {
    let mut set = BTreeSet::new();
    for g in generators {
        if !g.is_identity() {
            set.insert(g.clone());
            set.insert(g.inverse());
        }
    }
    set.into_iter().collect()
}

/// One closure pass: everything reachable from the seeds by the given step
/// function, pruned at `prune`, within `max_depth` levels.
fn closure(
    seeds: &[Word],
    step: impl Fn(&Word, &mut Vec<Word>),
    prune: usize,
    max_depth: usize,
) -> BTreeSet<Word> {
    let mut seen: BTreeSet<Word> = seeds.iter().cloned().collect();
    let mut frontier: Vec<Word> = seeds.to_vec();
    let mut products = Vec::new();
    for _ in 0..max_depth {
        if frontier.is_empty() {
            break;
        }
        let mut next = Vec::new();
        for w in &frontier {
            products.clear();
            step(w, &mut products);
            for p in products.drain(..) {
                if p.len() <= prune && seen.insert(p.clone()) {
                    next.push(p);
                }
            }
        }
        assert!(
            seen.len() <= MAX_ELEMENTS,
            "brute-force ball exploded; choose a smaller instance"
        );
        frontier = next;
    }
    seen
}

/// Widen the overshoot allowance for partial products until the restricted
/// ball stops changing (or the full allowance is reached). Deep cancellation
/// needs bulgy intermediate products; dense subgroups saturate immediately
/// and stay cheap.
fn stabilized_ball(
    seeds: &[Word],
    step: impl Fn(&Word, &mut Vec<Word>) + Copy,
    spec: &BallSpec,
    max_slack: usize,
) -> BTreeSet<Word> {
    let base = spec.max_len.max(seeds.iter().map(Word::len).max().unwrap_or(0));
    let mut result: Option<BTreeSet<Word>> = None;
    let mut stable = 0;
    let mut slack = 0;
    loop {
        let ball: BTreeSet<Word> = closure(seeds, step, base + slack, spec.max_depth)
            .into_iter()
            .filter(|w| w.len() <= spec.max_len)
            .collect();
        if result.as_ref() == Some(&ball) {
            stable += 1;
        } else {
            stable = 0;
        }
        if stable >= 2 || slack >= max_slack {
            return ball;
        }
        result = Some(ball);
        slack += 2;
    }
}

/// All reduced products of at most `max_depth` generator factors whose final
/// length is at most `max_len`.
pub fn brute_subgroup_ball(generators: &[Word], spec: &BallSpec) -> BTreeSet<Word> {
    let gens = generator_set(generators);
    let longest = gens.iter().map(Word::len).max().unwrap_or(0);
    let step = |w: &Word, out: &mut Vec<Word>| {
        for g in &gens {
            out.push(w.multiply(g));
        }
    };
    stabilized_ball(&[Word::identity()], step, spec, 2 * longest)
}

/// `{reduced(c₁ f c₂)}` restricted to `max_len`: the closure of `f` under
/// multiplying generators on either side, with at most `max_depth` factors
/// in total.
pub fn brute_coset_ball(generators: &[Word], f: &Word, spec: &BallSpec) -> BTreeSet<Word> {
    let gens = generator_set(generators);
    let longest = gens.iter().map(Word::len).max().unwrap_or(0);
    let step = |w: &Word, out: &mut Vec<Word>| {
        for g in &gens {
            out.push(g.multiply(w));
            out.push(w.multiply(g));
        }
    };
    stabilized_ball(std::slice::from_ref(f), step, spec, longest + 4)
}

/// All pairs `(x, y)` from the subgroup ball squared with `x·g = f·y`.
pub fn brute_solutions(
    generators: &[Word],
    g: &Word,
    f: &Word,
    spec: &BallSpec,
) -> BTreeSet<(Word, Word)> {
    let ball = brute_subgroup_ball(generators, spec);
    let mut out = BTreeSet::new();
    for x in &ball {
        let left = x.multiply(g);
        for y in &ball {
            if left == f.multiply(y) {
                out.insert((x.clone(), y.clone()));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::word::Alphabet;

    fn ab() -> Alphabet {
        Alphabet::with_rank(2)
    }

    fn w(s: &str) -> Word {
        ab().parse_word(s).unwrap()
    }

    fn set(words: &[&str]) -> BTreeSet<Word> {
        words.iter().map(|s| w(s)).collect()
    }

    #[test]
    fn cube_ball() {
        let ball = brute_subgroup_ball(
            &[w("aaa")],
            &BallSpec {
                max_len: 6,
                max_depth: 2,
            },
        );
        assert_eq!(ball, set(&["1", "aaa", "AAA", "a^6", "A^6"]));
    }

    #[test]
    fn free_group_short_ball() {
        let ball = brute_subgroup_ball(
            &[w("a"), w("b")],
            &BallSpec {
                max_len: 1,
                max_depth: 1,
            },
        );
        assert_eq!(ball, set(&["1", "a", "A", "b", "B"]));
    }

    #[test]
    fn fixture_ball_contents() {
        let gens: Vec<Word> = ["aaa", "bbb", "abbA", "baaaB", "babbAB"]
            .iter()
            .map(|s| w(s))
            .collect();
        let ball = brute_subgroup_ball(
            &gens,
            &BallSpec {
                max_len: 6,
                max_depth: 3,
            },
        );
        for member in ["aaa", "bbb", "aaabbb", "b^6", "abbA", "baaaB", "babbAB"] {
            assert!(ball.contains(&w(member)), "missing {member}");
        }
        // b⁻²a³b² has length 7, beyond the bound.
        assert!(!ball.contains(&w("BBaaabb")));
    }

    #[test]
    fn coset_ball_odd_powers() {
        let coset = brute_coset_ball(
            &[w("aa")],
            &w("a"),
            &BallSpec {
                max_len: 3,
                max_depth: 2,
            },
        );
        assert_eq!(coset, set(&["a", "A", "aaa", "AAA"]));
    }

    #[test]
    fn coset_ball_infinite_cyclic_conjugates() {
        let coset = brute_coset_ball(
            &[w("a")],
            &w("b"),
            &BallSpec {
                max_len: 3,
                max_depth: 6,
            },
        );
        for member in ["b", "ab", "Ab", "ba", "bA", "aba", "abA", "Aba", "AbA", "aab", "baa"] {
            assert!(coset.contains(&w(member)), "missing {member}");
        }
        assert!(!coset.contains(&w("ab^2")));
        assert!(coset.iter().all(|u| u.len() <= 3));
    }

    #[test]
    fn solutions_commuting_powers() {
        let sols = brute_solutions(
            &[w("aa")],
            &w("a"),
            &w("a"),
            &BallSpec {
                max_len: 4,
                max_depth: 2,
            },
        );
        let expected: BTreeSet<(Word, Word)> = [
            ("1", "1"),
            ("aa", "aa"),
            ("AA", "AA"),
            ("a^4", "a^4"),
            ("A^4", "A^4"),
        ]
        .iter()
        .map(|(x, y)| (w(x), w(y)))
        .collect();
        assert_eq!(sols, expected);
    }

    #[test]
    fn solutions_malnormal_case() {
        let sols = brute_solutions(
            &[w("a")],
            &w("b"),
            &w("b"),
            &BallSpec {
                max_len: 4,
                max_depth: 4,
            },
        );
        assert_eq!(sols.len(), 1);
        assert!(sols.contains(&(Word::identity(), Word::identity())));
    }

    #[test]
    fn monotone_in_spec() {
        let gens = [w("ab"), w("ba")];
        let small = brute_subgroup_ball(
            &gens,
            &BallSpec {
                max_len: 4,
                max_depth: 2,
            },
        );
        let large = brute_subgroup_ball(
            &gens,
            &BallSpec {
                max_len: 6,
                max_depth: 4,
            },
        );
        assert!(small.is_subset(&large));
    }

    #[test]
    fn order_independent() {
        let spec = BallSpec {
            max_len: 5,
            max_depth: 3,
        };
        let one = brute_subgroup_ball(&[w("ab"), w("bb")], &spec);
        let two = brute_subgroup_ball(&[w("bb"), w("ab")], &spec);
        assert_eq!(one, two);
    }
}
