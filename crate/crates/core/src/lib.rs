//! Kauffman-type bracket, Jones polynomial and mod-2 Khovanov homology of
//! pseudolinks, with homotopy moves on nanophrases and the `U_L` reduction
//! of nanophrases over arbitrary alphabets to pseudolinks.

pub mod bracket;
pub mod gf2;
pub mod homotopy;
pub mod khovanov;
pub mod parse;
pub mod phrase;
pub mod poly;
pub mod smoothing;
pub mod ul;

pub use bracket::{bracket, bracket_general, jhat, jhat_q, jones, BracketError};
pub use homotopy::{apply_move, applicable_moves, random_walk, HomotopyData, Move, MoveError, WalkOptions};
pub use khovanov::{homology, ChainComplex, EnhancedState, Grading, KhError, KhTable};
pub use parse::{parse_phrase, ParseError};
pub use phrase::{AlphaLetter, Alphabet, LetterId, Nanophrase, Occurrence, PhraseError, SymbolId, Violation};
pub use poly::{LaurentPoly, Var};
pub use smoothing::{resolve, ResolvedDiagram, SmoothingError, State};
pub use ul::{invariant_bundle, orbits, sign_l, u_l, Crs, Orbit, UlError};
