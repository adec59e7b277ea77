mod amalgam;
mod builder;
mod canon;
mod caps;
mod classes;
mod closure;
mod control;
mod embed;
mod error;
mod examples;
mod flow;
mod format;
mod gadget;
mod independence;
mod predim;
mod random;
pub mod report;
mod sa;
mod structure;
mod suites;
mod vertex_set;
mod witness;

pub use amalgam::{free_amalgam, free_power, Amalgam};
pub use builder::{
    audit_extension_property, build_generic, enumerate_class, enumerate_tasks, replay, strong_copies, structure_digest,
    Audit, BuildConfig, BuildLog, BuildStep, Class, ClassTag, ExtensionTask, TaskAudit,
};
pub use canon::{canonical_form, invariant_hash, Encoding};
pub use caps::Caps;
pub use classes::{girth, in_c0, in_cf, in_kn, shortest_cycle, Membership, Verdict};
pub use closure::{cl0, cld, dim, dim_rel, is_d_closed, ClosureResult, DimTable};
pub use control::{ratio, show, ControlFunction};
pub use embed::{embeddings, find_sese_embeddings, image, image_accepted, EmbedMode, Embedding};
pub use error::{Error, Result};
pub use examples::{
    build_example_511, build_example_511_step2, build_example_512, cd_graph, check_example_511,
    check_example_511_step2, check_example_512, example_511_bases, example_511_control, example_512_control,
    example_512_oracle_mismatch, path_fact, sample_closure_bound, sample_half_bound, smallest_large_s, BoundSample,
    Example511, Example511Base, Example511Check, Example511Step2, Example511Step2Check, Example512, Example512Check,
    PathFact,
};
pub use format::Document;
pub use gadget::{
    beatty, build_gadget, build_lemma49_amalgam, check_lemma49, gadget_params, verify_gadget, BeattySequence,
    GadgetCase, GadgetCheck, GadgetPair, GadgetParams, Lemma49Amalgam, Lemma49Check,
};
pub use independence::{
    axiom_suite, check_characterization, d_independent, perp, AxiomReport, Characterization, Violation, AXIOMS,
};
pub use predim::{is_self_sufficient, is_self_sufficient_exhaustive, is_strong, SelfSufficiency};
pub use random::{random_c0, random_extension, random_free_amalgam, RandomAmalgam};
pub use sa::{
    check_potential_extendability, count_msa_copies, is_msa, is_simply_algebraic, msa_base, msa_copies_over,
    sa_extensions, touching, Extendability, MsaBase, MsaCopies, MsaType, MultiplicityVerdict, PartialMap,
    TypeComparison,
};
pub use structure::{FiniteStructure, Mode, Part, RelationSpec, Signature};
pub use suites::{check_beatty_sequence, example_512_base, membership_case, run_suite, SuiteOptions, SUITES};
pub use vertex_set::VertexSet;
pub use witness::{replay as replay_witness, replay_case, Witness};

pub mod file {
    pub use crate::format::{parse, write, write_structure, HEADER};
}
