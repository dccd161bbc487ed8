//! Regular dessins from generating triples: permutation groups, linear
//! groups over prime fields, triangle-group arithmetic, hypermaps and
//! character-theoretic counting.

pub mod constructions;
pub mod counting;
pub mod error;
pub mod group;
pub mod hypermap;
pub mod linfp;
pub mod perm;
pub mod report;
pub mod triangle;

pub use counting::{CharacterTable, CharacterTable32, CharacterTable64};
pub use error::{Error, Result};
pub use group::{Fingerprint, PermGroup};
pub use hypermap::{Hypermap, WalshGraph};
pub use linfp::{Mat2, ProjElement};
pub use perm::{CycleType, Parity, Permutation};
pub use triangle::{GeneratingTriple, PairReport, TriangleType};
