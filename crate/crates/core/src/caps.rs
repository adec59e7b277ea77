use std::env;

/// Search limits. Every field can be overridden from the environment with
/// the variable named next to it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Caps {
    /// `PREDIMLAB_SUBSET_CAP`: free vertices in an exhaustive subset scan.
    pub subset: usize,
    /// `PREDIMLAB_GADGET_CAP`: vertices of a gadget verified exhaustively.
    pub gadget: usize,
    /// `PREDIMLAB_CANON_CAP`: vertices accepted by `canonical_form`.
    pub canon: usize,
    /// `PREDIMLAB_CONNECTED_K`: largest connected subset in partial checks.
    pub connected: usize,
    /// `PREDIMLAB_SAMPLES`: random subsets drawn in partial checks.
    pub samples: usize,
    /// `PREDIMLAB_CONNECTED_BUDGET`: connected subsets visited in partial checks.
    pub connected_budget: usize,
    /// `PREDIMLAB_SATURATION`: multiplicities at or above this compare equal.
    pub saturation: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            subset: 24,
            gadget: 22,
            canon: 8,
            connected: 18,
            samples: 1000,
            connected_budget: 2_000_000,
            saturation: 3,
        }
    }
}

impl Caps {
    pub fn from_env() -> Self {
        let mut caps = Caps::default();
        let read = |name: &str, slot: &mut usize| {
            if let Some(v) = env::var(name).ok().and_then(|v| v.trim().parse().ok()) {
                *slot = v;
            }
        };
        read("PREDIMLAB_SUBSET_CAP", &mut caps.subset);
        read("PREDIMLAB_GADGET_CAP", &mut caps.gadget);
        read("PREDIMLAB_CANON_CAP", &mut caps.canon);
        read("PREDIMLAB_CONNECTED_K", &mut caps.connected);
        read("PREDIMLAB_SAMPLES", &mut caps.samples);
        read("PREDIMLAB_CONNECTED_BUDGET", &mut caps.connected_budget);
        read("PREDIMLAB_SATURATION", &mut caps.saturation);
        read("PREDIMLAB_SATURATION", &mut caps.saturation);
        caps
    }
}
