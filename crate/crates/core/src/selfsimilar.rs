//! Mealy automata over the binary alphabet and the level-n permutational
//! representations they generate on the rooted binary tree.
//!
//! A state g with root output y = g(x) and section g|_x acts on words by
//! g(xw) = y (g|_x)(w). The level-n representation assigns to g the 2^n x 2^n
//! permutation matrix with block (y, x) equal to the level-(n-1) matrix of
//! g|_x when g(x) = y and zero otherwise; block column index is the input
//! letter, block row index is the output letter.
//!
//! Words are most-significant-letter-first: the root letter is the leading
//! bit of the vertex index, so the word "011" is vertex 3 at level 3.

use crate::error::{Error, Result};
use crate::numerics::{C64, CMatrix};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// Root-letter permutation emitted by a state: identity or the swap sigma.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputPerm {
    Id,
    Swap,
}

impl OutputPerm {
    fn apply(self, letter: usize) -> usize {
        match self {
            OutputPerm::Id => letter,
            OutputPerm::Swap => 1 - letter,
        }
    }
}

/// Mealy automaton over {0, 1} with a distinguished generator subset.
#[derive(Debug, Clone, PartialEq)]
pub struct Automaton {
    states: Vec<String>,
    output: Vec<OutputPerm>,
    /// transition[s][x] is the section s|_x.
    transition: Vec<[usize; 2]>,
    generators: Vec<usize>,
}

/// Wire format for automaton JSON (`--automaton-file`): state-name keyed
/// maps, transitions listed as [section at 0, section at 1].
#[derive(Debug, Serialize, Deserialize)]
struct AutomatonWire {
    states: Vec<String>,
    generators: Vec<String>,
    output: BTreeMap<String, OutputPerm>,
    transition: BTreeMap<String, [String; 2]>,
}

impl Automaton {
    /// Build from parallel state data. Panics on internal inconsistency;
    /// external input goes through [`Automaton::from_json`] instead.
    fn from_parts(
        states: &[&str],
        output: &[OutputPerm],
        transition: &[[&str; 2]],
        generators: &[&str],
    ) -> Self {
        let index = |name: &str| -> usize {
            states
                .iter()
                .position(|s| *s == name)
                .unwrap_or_else(|| panic!("unknown state `{name}`"))
        };
        Automaton {
            states: states.iter().map(|s| s.to_string()).collect(),
            output: output.to_vec(),
            transition: transition.iter().map(|[a, b]| [index(a), index(b)]).collect(),
            generators: generators.iter().map(|g| index(g)).collect(),
        }
    }

    pub fn states(&self) -> &[String] {
        &self.states
    }

    pub fn generator_names(&self) -> Vec<&str> {
        self.generators.iter().map(|&g| self.states[g].as_str()).collect()
    }

    fn state_index(&self, name: &str) -> Option<usize> {
        self.states.iter().position(|s| s == name)
    }

    /// Image of a binary word under a generator's self-similar action.
    ///
    /// The generator must belong to the automaton's generator set and the
    /// word must consist of the letters 0 and 1.
    pub fn act(&self, generator: &str, word: &str) -> String {
        let idx = self
            .state_index(generator)
            .filter(|i| self.generators.contains(i))
            .unwrap_or_else(|| panic!("`{generator}` is not a generator"));
        self.act_state(idx, word)
    }

    fn act_state(&self, mut state: usize, word: &str) -> String {
        let mut out = String::with_capacity(word.len());
        for ch in word.chars() {
            let x = match ch {
                '0' => 0,
                '1' => 1,
                _ => panic!("word letter must be 0 or 1, got `{ch}`"),
            };
            let y = self.output[state].apply(x);
            out.push(if y == 0 { '0' } else { '1' });
            state = self.transition[state][x];
        }
        out
    }

    /// Parse and validate the JSON wire format.
    pub fn from_json(text: &str) -> Result<Automaton> {
        let wire: AutomatonWire = serde_json::from_str(text)
            .map_err(|e| Error::DomainError(format!("automaton JSON: {e}")))?;
        let index = |name: &String| -> Result<usize> {
            wire.states
                .iter()
                .position(|s| s == name)
                .ok_or_else(|| Error::DomainError(format!("unknown state `{name}`")))
        };
        let mut output = Vec::with_capacity(wire.states.len());
        let mut transition = Vec::with_capacity(wire.states.len());
        for s in &wire.states {
            let o = wire
                .output
                .get(s)
                .ok_or_else(|| Error::DomainError(format!("state `{s}` missing output")))?;
            let t = wire
                .transition
                .get(s)
                .ok_or_else(|| Error::DomainError(format!("state `{s}` missing transition")))?;
            output.push(*o);
            transition.push([index(&t[0])?, index(&t[1])?]);
        }
        if wire.generators.is_empty() {
            return Err(Error::DomainError("no generators listed".into()));
        }
        let generators = wire
            .generators
            .iter()
            .map(index)
            .collect::<Result<Vec<_>>>()?;
        Ok(Automaton {
            states: wire.states,
            output,
            transition,
            generators,
        })
    }

    /// Serialize to the JSON wire format.
    pub fn to_json(&self) -> String {
        let wire = AutomatonWire {
            states: self.states.clone(),
            generators: self.generator_names().iter().map(|s| s.to_string()).collect(),
            output: self
                .states
                .iter()
                .cloned()
                .zip(self.output.iter().copied())
                .collect(),
            transition: self
                .states
                .iter()
                .enumerate()
                .map(|(i, s)| {
                    let [t0, t1] = self.transition[i];
                    (s.clone(), [self.states[t0].clone(), self.states[t1].clone()])
                })
                .collect(),
        };
        serde_json::to_string_pretty(&wire).expect("automaton serialization cannot fail")
    }
}

/// Built-in automata from the source examples.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BuiltinAutomaton {
    /// a = sigma, t = (a, t): the 2874-automaton realization of D_inf.
    Dinf2874,
    /// a = (a, a) sigma, t = (a, t).
    DinfAaSigma,
    /// a = (t, t) sigma, t = (a, t).
    DinfTtSigma,
    /// a = sigma, b = (a, c), c = (a, d), d = (1, b).
    Grigorchuk,
    /// a = sigma, b = (a, c), c = (1, d), d = (1, b): the overgroup variant.
    Overgroup,
    /// alpha = (1, alpha) sigma: the binary odometer.
    AddingMachine,
}

impl BuiltinAutomaton {
    pub const ALL: [BuiltinAutomaton; 6] = [
        BuiltinAutomaton::Dinf2874,
        BuiltinAutomaton::DinfAaSigma,
        BuiltinAutomaton::DinfTtSigma,
        BuiltinAutomaton::Grigorchuk,
        BuiltinAutomaton::Overgroup,
        BuiltinAutomaton::AddingMachine,
    ];

    pub fn name(self) -> &'static str {
        match self {
            BuiltinAutomaton::Dinf2874 => "dinf_2874",
            BuiltinAutomaton::DinfAaSigma => "dinf_aa_sigma",
            BuiltinAutomaton::DinfTtSigma => "dinf_tt_sigma",
            BuiltinAutomaton::Grigorchuk => "grigorchuk",
            BuiltinAutomaton::Overgroup => "overgroup",
            BuiltinAutomaton::AddingMachine => "adding_machine",
        }
    }

    pub fn build(self) -> Automaton {
        use OutputPerm::{Id, Swap};
        match self {
            BuiltinAutomaton::Dinf2874 => Automaton::from_parts(
                &["a", "t", "id"],
                &[Swap, Id, Id],
                &[["id", "id"], ["a", "t"], ["id", "id"]],
                &["a", "t"],
            ),
            BuiltinAutomaton::DinfAaSigma => Automaton::from_parts(
                &["a", "t"],
                &[Swap, Id],
                &[["a", "a"], ["a", "t"]],
                &["a", "t"],
            ),
            BuiltinAutomaton::DinfTtSigma => Automaton::from_parts(
                &["a", "t"],
                &[Swap, Id],
                &[["t", "t"], ["a", "t"]],
                &["a", "t"],
            ),
            BuiltinAutomaton::Grigorchuk => Automaton::from_parts(
                &["a", "b", "c", "d", "id"],
                &[Swap, Id, Id, Id, Id],
                &[
                    ["id", "id"],
                    ["a", "c"],
                    ["a", "d"],
                    ["id", "b"],
                    ["id", "id"],
                ],
                &["a", "b", "c", "d"],
            ),
            BuiltinAutomaton::Overgroup => Automaton::from_parts(
                &["a", "b", "c", "d", "id"],
                &[Swap, Id, Id, Id, Id],
                &[
                    ["id", "id"],
                    ["a", "c"],
                    ["id", "d"],
                    ["id", "b"],
                    ["id", "id"],
                ],
                &["a", "b", "c", "d"],
            ),
            BuiltinAutomaton::AddingMachine => Automaton::from_parts(
                &["alpha", "id"],
                &[Swap, Id],
                &[["id", "alpha"], ["id", "id"]],
                &["alpha"],
            ),
        }
    }
}

/// Look up a built-in automaton by name.
pub fn builtin_automaton(name: &str) -> Result<Automaton> {
    BuiltinAutomaton::ALL
        .iter()
        .find(|b| b.name() == name)
        .map(|b| b.build())
        .ok_or_else(|| Error::UnknownAutomaton(name.to_string()))
}

/// Default cap on the tree level (4096 x 4096 dense matrices).
pub const DEFAULT_LEVEL_CAP: u32 = 12;

/// Level-n permutational representation of an automaton's generators,
/// stored as permutation vectors; dense matrices materialize on demand.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LevelRep {
    level: u32,
    names: Vec<String>,
    perms: Vec<Vec<u32>>,
}

impl LevelRep {
    pub fn level(&self) -> u32 {
        self.level
    }

    /// Matrix dimension 2^level.
    pub fn dim(&self) -> usize {
        1usize << self.level
    }

    pub fn generator_names(&self) -> &[String] {
        &self.names
    }

    /// Forward permutation of a generator: `perm[w]` is the image vertex.
    pub fn permutation(&self, name: &str) -> Option<&[u32]> {
        self.names
            .iter()
            .position(|n| n == name)
            .map(|i| self.perms[i].as_slice())
    }

    /// Dense permutation matrix with entry (g(w), w) = 1.
    pub fn matrix(&self, name: &str) -> Option<CMatrix> {
        self.permutation(name).map(|p| permutation_matrix(p))
    }
}

/// Dense 0/1 matrix of a forward permutation.
pub fn permutation_matrix(perm: &[u32]) -> CMatrix {
    let n = perm.len();
    let mut m = CMatrix::zeros(n);
    for (w, &img) in perm.iter().enumerate() {
        m[(img as usize, w)] = C64::new(1.0, 0.0);
    }
    m
}

/// Composition acting right-to-left: `(p after q)[w] = p[q[w]]`, matching
/// the matrix product M(p) M(q).
pub fn compose_perms(p: &[u32], q: &[u32]) -> Vec<u32> {
    q.iter().map(|&w| p[w as usize]).collect()
}

/// Multiset of cycle lengths of a permutation.
pub fn cycle_lengths(perm: &[u32]) -> Vec<usize> {
    let mut seen = vec![false; perm.len()];
    let mut lengths = Vec::new();
    for start in 0..perm.len() {
        if seen[start] {
            continue;
        }
        let mut k = start;
        let mut len = 0;
        while !seen[k] {
            seen[k] = true;
            k = perm[k] as usize;
            len += 1;
        }
        lengths.push(len);
    }
    lengths.sort_unstable();
    lengths
}

/// Build the level-n representation with the default level cap.
pub fn build_level_rep(automaton: &Automaton, n: u32) -> Result<LevelRep> {
    build_level_rep_with_cap(automaton, n, DEFAULT_LEVEL_CAP)
}

/// Build the level-n representation, refusing levels above `cap`.
///
/// Level 0 is the 1 x 1 identity for every generator. Level k sends vertex
/// x * 2^{k-1} + r to y * 2^{k-1} + (s|_x at level k-1)(r) where y = s(x):
/// the iterative form of the block recursion.
pub fn build_level_rep_with_cap(automaton: &Automaton, n: u32, cap: u32) -> Result<LevelRep> {
    if n > cap {
        return Err(Error::LevelTooLarge { level: n, cap });
    }
    let nstates = automaton.states.len();
    // All states participate in the recursion even when only generators
    // are reported.
    let mut perms: Vec<Vec<u32>> = vec![vec![0]; nstates];
    for k in 1..=n {
        let half = 1u32 << (k - 1);
        let mut next: Vec<Vec<u32>> = Vec::with_capacity(nstates);
        for s in 0..nstates {
            let mut p = vec![0u32; (2 * half) as usize];
            for x in 0..2usize {
                let y = automaton.output[s].apply(x) as u32;
                let section = &perms[automaton.transition[s][x]];
                for r in 0..half {
                    p[(x as u32 * half + r) as usize] = y * half + section[r as usize];
                }
            }
            next.push(p);
        }
        perms = next;
    }
    let names: Vec<String> = automaton
        .generators
        .iter()
        .map(|&g| automaton.states[g].clone())
        .collect();
    let gen_perms = automaton
        .generators
        .iter()
        .map(|&g| perms[g].clone())
        .collect();
    Ok(LevelRep {
        level: n,
        names,
        perms: gen_perms,
    })
}

/// The level-n matrix of u = (b + c + d - 1)/2 in the Grigorchuk
/// representation; an involution that coincides with the dihedral t.
pub fn u_level_matrix(n: u32) -> Result<CMatrix> {
    let rep = build_level_rep(&BuiltinAutomaton::Grigorchuk.build(), n)?;
    let dim = rep.dim();
    let mut m = CMatrix::zeros(dim);
    for name in ["b", "c", "d"] {
        let p = rep.permutation(name).expect("grigorchuk generator");
        for (w, &img) in p.iter().enumerate() {
            m[(img as usize, w)] += C64::new(0.5, 0.0);
        }
    }
    for k in 0..dim {
        m[(k, k)] -= C64::new(0.5, 0.0);
    }
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn word_of(index: usize, level: u32) -> String {
        (0..level)
            .rev()
            .map(|b| if index >> b & 1 == 1 { '1' } else { '0' })
            .collect()
    }

    #[test]
    fn builtin_names_round_trip() {
        for b in BuiltinAutomaton::ALL {
            assert_eq!(builtin_automaton(b.name()).unwrap(), b.build());
        }
        assert_eq!(
            builtin_automaton("nope"),
            Err(Error::UnknownAutomaton("nope".into()))
        );
    }

    #[test]
    fn dinf_2874_flips_only_first_letter_under_a() {
        let a = BuiltinAutomaton::Dinf2874.build();
        assert_eq!(a.act("a", "0110"), "1110");
        assert_eq!(a.act("a", "1110"), "0110");
    }

    #[test]
    fn grigorchuk_d_fixes_zero_subtree() {
        let g = BuiltinAutomaton::Grigorchuk.build();
        assert_eq!(g.act("d", "0110101"), "0110101");
        assert_eq!(g.act("d", "01"), "01");
    }

    #[test]
    fn involutive_generators_square_to_identity_on_words() {
        for b in [
            BuiltinAutomaton::Dinf2874,
            BuiltinAutomaton::DinfAaSigma,
            BuiltinAutomaton::DinfTtSigma,
            BuiltinAutomaton::Grigorchuk,
            BuiltinAutomaton::Overgroup,
        ] {
            let a = b.build();
            for g in a.generator_names() {
                for w in 0..64usize {
                    let word = word_of(w, 6);
                    assert_eq!(a.act(g, &a.act(g, &word)), word, "{b:?} {g}");
                }
            }
        }
    }

    #[test]
    fn level_one_matrices_match_hand_unfold() {
        let rep = build_level_rep(&BuiltinAutomaton::Dinf2874.build(), 1).unwrap();
        assert_eq!(rep.permutation("a").unwrap(), &[1, 0]);
        assert_eq!(rep.permutation("t").unwrap(), &[0, 1]);
        let rep = build_level_rep(&BuiltinAutomaton::Grigorchuk.build(), 1).unwrap();
        assert_eq!(rep.permutation("a").unwrap(), &[1, 0]);
        for g in ["b", "c", "d"] {
            assert_eq!(rep.permutation(g).unwrap(), &[0, 1]);
        }
    }

    #[test]
    fn level_rep_matches_action_oracle() {
        // The block recursion must reproduce the letterwise action.
        for b in BuiltinAutomaton::ALL {
            let a = b.build();
            for n in 0..=5u32 {
                let rep = build_level_rep(&a, n).unwrap();
                for g in a.generator_names() {
                    let p = rep.permutation(g).unwrap();
                    for w in 0..1usize << n {
                        let image = a.act(g, &word_of(w, n));
                        let expected = usize::from_str_radix(&image, 2).unwrap_or(0);
                        assert_eq!(p[w] as usize, expected, "{b:?} {g} level {n}");
                    }
                }
            }
        }
    }

    #[test]
    fn permutation_matrix_convention() {
        let rep = build_level_rep(&BuiltinAutomaton::Dinf2874.build(), 2).unwrap();
        let m = rep.matrix("a").unwrap();
        // a sends vertex w to its image; entry (image, w) = 1.
        let p = rep.permutation("a").unwrap();
        for (w, &img) in p.iter().enumerate() {
            assert_eq!(m[(img as usize, w)], C64::new(1.0, 0.0));
        }
        let ones: usize = m
            .entries()
            .iter()
            .filter(|e| **e == C64::new(1.0, 0.0))
            .count();
        assert_eq!(ones, 4);
    }

    #[test]
    fn level_cap_enforced() {
        let a = BuiltinAutomaton::Dinf2874.build();
        assert_eq!(
            build_level_rep_with_cap(&a, 9, 8),
            Err(Error::LevelTooLarge { level: 9, cap: 8 })
        );
        assert!(build_level_rep_with_cap(&a, 8, 8).is_ok());
    }

    #[test]
    fn adding_machine_is_full_cycle() {
        for n in 1..=8u32 {
            let rep = build_level_rep(&BuiltinAutomaton::AddingMachine.build(), n).unwrap();
            let lengths = cycle_lengths(rep.permutation("alpha").unwrap());
            assert_eq!(lengths, vec![1usize << n]);
        }
    }

    #[test]
    fn dihedral_product_cycles_are_powers_of_two() {
        let a = BuiltinAutomaton::Dinf2874.build();
        for n in 1..=8u32 {
            let rep = build_level_rep(&a, n).unwrap();
            let at = compose_perms(
                rep.permutation("a").unwrap(),
                rep.permutation("t").unwrap(),
            );
            for len in cycle_lengths(&at) {
                assert!(len.is_power_of_two(), "level {n} cycle {len}");
            }
        }
    }

    #[test]
    fn u_matrix_small_levels() {
        let u1 = u_level_matrix(1).unwrap();
        assert_eq!(u1, CMatrix::identity(2));
        for n in 0..=5u32 {
            let u = u_level_matrix(n).unwrap();
            assert_eq!(u.mul(&u), CMatrix::identity(1 << n), "u^2 at level {n}");
            let t = build_level_rep(&BuiltinAutomaton::Dinf2874.build(), n)
                .unwrap()
                .matrix("t")
                .unwrap();
            assert_eq!(u, t, "level {n}");
        }
    }

    #[test]
    fn json_round_trip_and_validation() {
        let a = BuiltinAutomaton::Grigorchuk.build();
        let text = a.to_json();
        let back = Automaton::from_json(&text).unwrap();
        assert_eq!(a, back);
        for n in 0..=4u32 {
            let r1 = build_level_rep(&a, n).unwrap();
            let r2 = build_level_rep(&back, n).unwrap();
            for g in a.generator_names() {
                assert_eq!(r1.permutation(g), r2.permutation(g));
            }
        }
        assert!(matches!(
            Automaton::from_json("{\"states\": [\"x\"]}"),
            Err(Error::DomainError(_))
        ));
        let missing = r#"{
            "states": ["a"], "generators": ["a"],
            "output": {"a": "swap"}, "transition": {"a": ["a", "b"]}
        }"#;
        assert!(matches!(Automaton::from_json(missing), Err(Error::DomainError(_))));
    }
}
