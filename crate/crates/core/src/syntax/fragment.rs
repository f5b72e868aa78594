use std::cmp::Ordering;
use std::fmt;

use crate::syntax::ast::{CoFormula, Formula, PcoFormula};

/// Syntactic fragment of a formula.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FragmentLabel {
    PMinus,
    P,
    PSupset,
    PBoxRight,
    Pco,
    Extended,
}

impl FragmentLabel {
    fn rank(self) -> u8 {
        match self {
            FragmentLabel::PMinus => 0,
            FragmentLabel::P => 1,
            FragmentLabel::PSupset | FragmentLabel::PBoxRight => 2,
            FragmentLabel::Pco => 3,
            FragmentLabel::Extended => 4,
        }
    }

    /// Inclusion of fragments; `P(⊃)` and `P(□→)` are incomparable.
    pub fn le(self, other: FragmentLabel) -> bool {
        self.partial_cmp(&other).is_some_and(|o| o != Ordering::Greater)
    }

    pub fn name(self) -> &'static str {
        match self {
            FragmentLabel::PMinus => "P-",
            FragmentLabel::P => "P",
            FragmentLabel::PSupset => "P(=>)",
            FragmentLabel::PBoxRight => "P([])",
            FragmentLabel::Pco => "PCO",
            FragmentLabel::Extended => "EXTENDED",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        let all = [
            FragmentLabel::PMinus,
            FragmentLabel::P,
            FragmentLabel::PSupset,
            FragmentLabel::PBoxRight,
            FragmentLabel::Pco,
            FragmentLabel::Extended,
        ];
        let lower = s.to_ascii_lowercase();
        let alias = match lower.as_str() {
            "p-minus" | "pminus" => "P-",
            "p-supset" | "psupset" => "P(=>)",
            "p-boxright" | "pboxright" | "p-box" => "P([])",
            _ => s,
        };
        all.into_iter().find(|l| l.name().eq_ignore_ascii_case(alias))
    }
}

impl PartialOrd for FragmentLabel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        if self == other {
            return Some(Ordering::Equal);
        }
        let incomparable = matches!(
            (self, other),
            (FragmentLabel::PSupset, FragmentLabel::PBoxRight) | (FragmentLabel::PBoxRight, FragmentLabel::PSupset)
        );
        if incomparable {
            None
        } else {
            Some(self.rank().cmp(&other.rank()))
        }
    }
}

impl fmt::Display for FragmentLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Default)]
struct Features {
    supset: bool,
    cf: bool,
    comparison: bool,
    conditional: bool,
}

fn scan_co(a: &CoFormula, feat: &mut Features) {
    feat.supset |= a.contains_implies();
    feat.cf |= a.contains_cf();
}

fn scan_pco(f: &PcoFormula, feat: &mut Features) {
    match f {
        PcoFormula::Lit(_) => {}
        PcoFormula::Prob(atom) => {
            feat.comparison |= atom.is_comparison();
            feat.conditional |= atom.is_conditional();
            for part in atom.co_parts() {
                scan_co(part, feat);
            }
        }
        PcoFormula::And(a, b) | PcoFormula::GOr(a, b) => {
            scan_pco(a, feat);
            scan_pco(b, feat);
        }
        PcoFormula::Implies(a, b) => {
            feat.supset = true;
            scan_co(a, feat);
            scan_pco(b, feat);
        }
        PcoFormula::Cf(_, b) => {
            feat.cf = true;
            scan_pco(b, feat);
        }
    }
}

/// Least fragment containing `f`; occurrences are counted at both levels.
pub fn classify_fragment(f: &Formula) -> FragmentLabel {
    let mut feat = Features::default();
    match f {
        Formula::Co(a) => scan_co(a, &mut feat),
        Formula::Pco(p) => scan_pco(p, &mut feat),
    }
    if feat.conditional {
        FragmentLabel::Extended
    } else if feat.supset && feat.cf {
        FragmentLabel::Pco
    } else if feat.supset {
        FragmentLabel::PSupset
    } else if feat.cf {
        FragmentLabel::PBoxRight
    } else if feat.comparison {
        FragmentLabel::P
    } else {
        FragmentLabel::PMinus
    }
}

pub fn contains_cf(f: &Formula) -> bool {
    let mut feat = Features::default();
    match f {
        Formula::Co(a) => scan_co(a, &mut feat),
        Formula::Pco(p) => scan_pco(p, &mut feat),
    }
    feat.cf
}
