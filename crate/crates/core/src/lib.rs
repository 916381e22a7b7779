//! Exact character-table computations: cyclotomic arithmetic, class
//! functions, fusion and power-map solving, lattice reduction, permutation
//! characters, table heads, a small Dixon-style oracle, and a scripted
//! pipeline runner tying them together.

pub mod classfun;
pub mod cyclo;
pub mod fusion;
pub mod headbuilder;
pub mod lattice;
pub mod numtheory;
pub mod oracle;
pub mod permchar;
pub mod pipeline;
pub mod powermap;
pub mod table;

pub use classfun::ClassFunction;
pub use cyclo::Cyclotomic;
pub use fusion::ParaMap;
pub use table::{CharacterTable, ClassData};
