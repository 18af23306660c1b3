//! Named algorithms used throughout the examples and tests.

use crate::algorithm::{SlowAlgorithm, Window};
use crate::spec::{algorithm_from_words, AlgorithmSpec};

pub struct Entry {
    pub name: &'static str,
    pub words: &'static [&'static str],
    pub description: &'static str,
    pub window: Option<Window>,
}

pub const CATALOG: &[Entry] = &[
    Entry {
        name: "ln",
        words: &["L", "N"],
        description: "x/(1-x) below 1, x-1 above; its first return to [1, inf] is the ceiling algorithm",
        window: Some(Window { i: 1, j: 1, open_left: false, open_right: false }),
    },
    Entry {
        name: "farey",
        words: &["L", "NF"],
        description: "Farey map",
        window: None,
    },
    Entry {
        name: "flip-ln",
        words: &["LF", "NF"],
        description: "both branches orientation reversing",
        window: None,
    },
    Entry {
        name: "gauss",
        words: &["LF", "N"],
        description: "slow Gauss map; its first return to [0, 1) is the Gauss map",
        window: Some(Window { i: 0, j: 0, open_left: false, open_right: true }),
    },
    Entry {
        name: "pythagorean",
        words: &["LL", "LNF", "N"],
        description: "enumerates pythagorean triples; conjugate by L to the even continued fractions",
        window: None,
    },
    Entry {
        name: "odd",
        words: &["LL", "LN", "NF"],
        description: "conjugate by L to the odd continued fractions",
        window: None,
    },
    Entry {
        name: "index4",
        words: &["LLL", "LLNF", "LNL", "LNNF", "N"],
        description: "five branches, subgroup of index 4",
        window: None,
    },
    Entry {
        name: "defect6",
        words: &["LLL", "LLN", "LNLF", "LNN", "NLL", "NLN", "NNL", "NNN"],
        description: "all eight words of length 3, one flipped; full group, defect 6",
        window: None,
    },
    Entry {
        name: "tail-fails",
        words: &["L", "NLL", "NLN", "NN"],
        description: "generates the modular group but tail equivalence fails",
        window: None,
    },
    Entry {
        name: "tail-holds",
        words: &["L", "NL", "NNL", "NNN"],
        description: "generates the modular group and tail equivalence holds",
        window: None,
    },
    Entry {
        name: "no-return",
        words: &["L", "NL", "NNF"],
        description: "the first return to [0, 1] is undefined on the golden ratio class",
        window: Some(Window { i: 0, j: 0, open_left: false, open_right: false }),
    },
];

pub fn entry(name: &str) -> Option<&'static Entry> {
    CATALOG.iter().find(|e| e.name == name)
}

impl Entry {
    pub fn algorithm(&self) -> SlowAlgorithm {
        algorithm_from_words(self.words).expect("catalog entries are valid")
    }

    pub fn spec(&self) -> AlgorithmSpec {
        AlgorithmSpec {
            name: Some(self.name.to_string()),
            description: Some(self.description.to_string()),
            algorithm: self.algorithm(),
            window: self.window,
        }
    }
}

/// Shorthand for a catalog algorithm; panics on an unknown name.
pub fn named(name: &str) -> SlowAlgorithm {
    entry(name).unwrap_or_else(|| panic!("no catalog entry {name:?}")).algorithm()
}
