//! Two-level formula syntax: parser, printer, fragment classifier and abbreviations.

mod ast;
mod expand;
mod fragment;
mod parser;
mod printer;

pub use ast::{rat, Bound, Cmp, CoFormula, Formula, Intervention, Literal, PcoFormula, ProbAtom, ProbTerm};
pub use expand::{dual, expand_abbreviations, expand_conditionals};
pub use fragment::{classify_fragment, contains_cf, FragmentLabel};
pub use parser::{infer_signature, parse, parse_co, parse_decimal, parse_pco};
pub use printer::{print, print_co, print_pco, rational, Printed};
