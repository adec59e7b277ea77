//! Finite approximants of generic structures: class enumeration, a budgeted
//! chain of free amalgams, and an audit of the extension property.

use std::collections::{BTreeSet, HashSet};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::amalgam::free_amalgam;
use crate::canon::{canonical_coloured, canonical_form, Encoding};
use crate::caps::Caps;
use crate::classes::{in_c0, in_cf, in_kn, Membership, Verdict};
use crate::closure::cld;
use crate::control::ControlFunction;
use crate::embed::{embeddings, image, image_accepted, EmbedMode, Embedding};
use crate::error::{check_cap, input, Error, Result};
use crate::format::write_structure;
use crate::predim::is_self_sufficient;
use crate::structure::{FiniteStructure, Mode, Part, Signature};
use crate::vertex_set::VertexSet;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum ClassTag {
    C0,
    Cf,
    Kn,
}

impl ClassTag {
    pub fn parse(text: &str) -> Result<Self> {
        match text.to_ascii_lowercase().as_str() {
            "c0" => Ok(ClassTag::C0),
            "cf" => Ok(ClassTag::Cf),
            "kn" => Ok(ClassTag::Kn),
            _ => input(format!("unknown class {text}")),
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            ClassTag::C0 => "c0",
            ClassTag::Cf => "cf",
            ClassTag::Kn => "kn",
        }
    }

    /// Embeddings the class amalgamates over.
    pub fn embed_mode(self) -> EmbedMode {
        match self {
            ClassTag::C0 => EmbedMode::Le,
            ClassTag::Cf | ClassTag::Kn => EmbedMode::LeD,
        }
    }
}

/// A class together with the data it depends on.
#[derive(Debug, Clone, PartialEq)]
pub struct Class {
    pub tag: ClassTag,
    pub signature: Signature,
    pub control: Option<ControlFunction>,
    pub ngon: Option<u32>,
}

impl Class {
    pub fn c0(signature: Signature) -> Self {
        Class {
            tag: ClassTag::C0,
            signature,
            control: None,
            ngon: None,
        }
    }

    pub fn cf(signature: Signature, f: ControlFunction) -> Self {
        Class {
            tag: ClassTag::Cf,
            signature,
            control: Some(f),
            ngon: None,
        }
    }

    pub fn kn(ngon: u32) -> Result<Self> {
        Ok(Class {
            tag: ClassTag::Kn,
            signature: Signature::polygon(ngon)?,
            control: None,
            ngon: Some(ngon),
        })
    }

    fn validate(&self) -> Result<()> {
        match self.tag {
            ClassTag::Cf if self.control.is_none() => input("class C_f needs a control function"),
            ClassTag::Cf if self.control.as_ref().unwrap().n() != self.signature.vertex_weight() => {
                input("control function and signature disagree on n")
            }
            ClassTag::Kn if self.ngon.is_none() => input("class K_n needs n"),
            ClassTag::Kn if self.signature != Signature::polygon(self.ngon.unwrap())? => {
                input("class K_n needs the polygon signature")
            }
            _ => Ok(()),
        }
    }

    pub fn certify(&self, s: &FiniteStructure, caps: &Caps, seed: u64) -> Result<Membership> {
        Ok(match self.tag {
            ClassTag::C0 => in_c0(s),
            ClassTag::Cf => in_cf(s, self.control.as_ref().expect("validated"), caps, seed),
            ClassTag::Kn => in_kn(s, self.ngon.expect("validated"), caps)?,
        })
    }

    /// `A ≤ B` for C0, `A ≤_d B` otherwise.
    pub fn strong(&self, b: &FiniteStructure, a: &VertexSet) -> Result<bool> {
        Ok(match self.tag.embed_mode() {
            EmbedMode::LeD => cld(b, a)? == *a,
            _ => is_self_sufficient(b, a, &b.all())?.holds,
        })
    }
}

/// Every structure of the class on at most `max_size` vertices, one per
/// isomorphism type, ordered by size and then encoding.
pub fn enumerate_class(class: &Class, max_size: usize, caps: &Caps) -> Result<Vec<FiniteStructure>> {
    class.validate()?;
    check_cap("class enumeration (vertices)", max_size, caps.canon)?;
    let sig = &class.signature;
    let mut out = vec![FiniteStructure::empty(sig.clone())];
    let mut layer = out.clone();
    for k in 1..=max_size {
        let mut seen: BTreeSet<Encoding> = BTreeSet::new();
        let mut next = Vec::new();
        let v = k as u32 - 1;
        for rep in &layer {
            let parts: Vec<Option<Part>> = match sig.mode() {
                Mode::Hypergraph => vec![None],
                Mode::Bipartite => vec![Some(Part::Point), Some(Part::Line)],
            };
            for part in parts {
                let choices = new_tuples(rep, v, part);
                check_cap("class enumeration (tuples through a new vertex)", choices.len(), 20)?;
                for mask in 0u32..1 << choices.len() {
                    let added: Vec<(usize, Vec<u32>)> = choices
                        .iter()
                        .enumerate()
                        .filter(|(i, _)| mask >> i & 1 == 1)
                        .map(|(_, t)| t.clone())
                        .collect();
                    let new_parts: Vec<(u32, Part)> = part.map(|p| vec![(v, p)]).unwrap_or_default();
                    let s = rep.extended(&[v], &new_parts, &added)?;
                    let member = class.certify(&s, caps, 0)?;
                    if member.verdict != Verdict::Pass {
                        continue;
                    }
                    if seen.insert(canonical_form(&s, caps.canon)?) {
                        next.push(s);
                    }
                }
            }
        }
        next.sort_by_cached_key(|s| canonical_form(s, caps.canon).expect("within cap"));
        out.extend(next.iter().cloned());
        layer = next;
    }
    Ok(out)
}

fn new_tuples(rep: &FiniteStructure, v: u32, part: Option<Part>) -> Vec<(usize, Vec<u32>)> {
    let mut out = Vec::new();
    for (rel, spec) in rep.signature().relations().iter().enumerate() {
        for combo in subsets_of_size(rep.len(), spec.arity - 1) {
            if let Some(p) = part {
                if combo.iter().any(|&q| rep.part(q) == Some(p)) {
                    continue;
                }
            }
            let mut t: Vec<u32> = combo.iter().map(|&q| rep.id(q)).collect();
            t.push(v);
            out.push((rel, t));
        }
    }
    out
}

fn subsets_of_size(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    go(0, n, k, &mut cur, &mut out);
    out
}

/// Realize a copy of `extension` over every strong copy of `base`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtensionTask {
    pub extension: FiniteStructure,
    /// Ids of the base inside `extension`.
    pub base: Vec<u32>,
    pub class: ClassTag,
}

impl ExtensionTask {
    pub fn base_pattern(&self) -> FiniteStructure {
        self.extension
            .induced(&self.extension.set_of(&self.base).expect("base inside extension"))
    }

    pub fn label(&self) -> String {
        format!(
            "base {} in {} vertices, {} instances",
            self.base.len(),
            self.extension.len(),
            self.extension.instance_count()
        )
    }
}

/// All tasks `(base, extension)` with the extension in the class on at
/// most `max_size` vertices and the base a proper strong subset, one per
/// isomorphism type of the pair.
pub fn enumerate_tasks(class: &Class, max_size: usize, caps: &Caps) -> Result<Vec<ExtensionTask>> {
    let mut keyed: Vec<((usize, usize, Encoding), ExtensionTask)> = Vec::new();
    let mut seen = BTreeSet::new();
    for ext in enumerate_class(class, max_size, caps)? {
        let n = ext.len();
        if n == 0 {
            continue;
        }
        let frame: Vec<usize> = (0..n).collect();
        for mask in 0u64..(1 << n) - 1 {
            let base = VertexSet::from_mask(n, &frame, mask);
            if !class.strong(&ext, &base)? {
                continue;
            }
            let colours: Vec<u32> = (0..n).map(|p| base.contains(p) as u32).collect();
            let (key, _) = canonical_coloured(&ext, &colours, u64::MAX)?;
            if seen.insert(key.clone()) {
                let task = ExtensionTask {
                    base: ext.ids_of(&base),
                    extension: ext.clone(),
                    class: class.tag,
                };
                keyed.push(((n, base.len(), key), task));
            }
        }
    }
    keyed.sort_by(|a, b| a.0.cmp(&b.0));
    Ok(keyed.into_iter().map(|(_, t)| t).collect())
}

#[derive(Debug, Clone, PartialEq)]
pub struct BuildConfig {
    pub class: Class,
    pub max_pattern: usize,
    pub budget: usize,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BuildStep {
    pub step: usize,
    pub task: usize,
    /// Ambient ids of the base copy, in the order of the task's base ids.
    pub over: Vec<u32>,
    pub new_ids: Vec<u32>,
    pub size: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BuildLog {
    pub class: ClassTag,
    pub max_pattern: usize,
    pub budget: usize,
    pub seed: u64,
    pub tasks: usize,
    pub steps: Vec<BuildStep>,
    /// Sha-256 of the final structure in the text format.
    pub digest: String,
    pub label: String,
}

impl BuildLog {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("log serializes") + "\n"
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Input(format!("bad build log: {e}")))
    }
}

pub fn structure_digest(s: &FiniteStructure) -> String {
    hex::encode(Sha256::digest(write_structure(s).as_bytes()))
}

/// Glues a fresh copy of the task's extension over `over`.
fn realize(s: &FiniteStructure, task: &ExtensionTask, over: &[u32]) -> Result<(FiniteStructure, Vec<u32>)> {
    let glue: Vec<(u32, u32)> = over.iter().copied().zip(task.base.iter().copied()).collect();
    let am = free_amalgam(s, &task.extension, &glue)?;
    let new_ids: Vec<u32> = am
        .right
        .iter()
        .filter(|(k, _)| !task.base.contains(k))
        .map(|(_, &v)| v)
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    Ok((am.structure, new_ids))
}

fn check_step(
    config: &BuildConfig,
    caps: &Caps,
    old: &FiniteStructure,
    new: &FiniteStructure,
    step: usize,
) -> Result<()> {
    let member = config.class.certify(new, caps, config.seed ^ step as u64)?;
    if member.verdict == Verdict::Fail {
        return Err(Error::Internal(format!(
            "step {step} left the class {}: {}",
            config.class.tag.as_str(),
            member.note
        )));
    }
    let previous = new.set_of(old.ids())?;
    if !config.class.strong(new, &previous)? {
        return Err(Error::Internal(format!("step {step} broke the chain")));
    }
    Ok(())
}

/// Runs the chain construction: tasks in round robin (starting at
/// `seed mod #tasks`), each step realizing the first unrealized strong copy
/// of the next task's base. Stops at the budget or when no task has work.
pub fn build_generic(config: &BuildConfig, caps: &Caps) -> Result<(FiniteStructure, BuildLog)> {
    config.class.validate()?;
    let tasks = enumerate_tasks(&config.class, config.max_pattern, caps)?;
    let mode = config.class.tag.embed_mode();
    let mut s = FiniteStructure::empty(config.class.signature.clone());
    let mut steps = Vec::new();
    let mut done: HashSet<(usize, Vec<u32>)> = HashSet::new();
    let mut rejected: HashSet<(usize, Vec<u32>)> = HashSet::new();
    let patterns: Vec<FiniteStructure> = tasks.iter().map(|t| t.base_pattern()).collect();
    let mut cursor = if tasks.is_empty() {
        0
    } else {
        (config.seed % tasks.len() as u64) as usize
    };
    let mut idle = 0;
    while steps.len() < config.budget && idle < tasks.len() {
        let ti = cursor;
        cursor = (cursor + 1) % tasks.len();
        let base = &patterns[ti];
        let mut chosen = None;
        for e in embeddings(&s, base, &[], usize::MAX)? {
            let over: Vec<u32> = tasks[ti]
                .base
                .iter()
                .map(|&id| s.id(e[base.pos(id).unwrap()]))
                .collect();
            let key = (ti, over.clone());
            if done.contains(&key) || rejected.contains(&key) {
                continue;
            }
            if image_accepted(&s, &e, mode)? {
                chosen = Some(over);
                break;
            }
            rejected.insert(key);
        }
        let Some(over) = chosen else {
            idle += 1;
            continue;
        };
        idle = 0;
        let (next, new_ids) = realize(&s, &tasks[ti], &over)?;
        check_step(config, caps, &s, &next, steps.len())?;
        done.insert((ti, over.clone()));
        s = next;
        steps.push(BuildStep {
            step: steps.len(),
            task: ti,
            over,
            new_ids,
            size: s.len(),
        });
    }
    let log = BuildLog {
        class: config.class.tag,
        max_pattern: config.max_pattern,
        budget: config.budget,
        seed: config.seed,
        tasks: tasks.len(),
        steps,
        digest: structure_digest(&s),
        label: "finite approximant".into(),
    };
    Ok((s, log))
}

/// Rebuilds the structure recorded in `log` and checks its digest.
pub fn replay(config: &BuildConfig, log: &BuildLog, caps: &Caps) -> Result<FiniteStructure> {
    let tasks = enumerate_tasks(&config.class, log.max_pattern, caps)?;
    if tasks.len() != log.tasks {
        return input("build log was made with a different task list");
    }
    let mut s = FiniteStructure::empty(config.class.signature.clone());
    for step in &log.steps {
        let task = tasks
            .get(step.task)
            .ok_or_else(|| Error::Input(format!("step {} names unknown task {}", step.step, step.task)))?;
        let (next, new_ids) = realize(&s, task, &step.over)?;
        if new_ids != step.new_ids || next.len() != step.size {
            return input(format!("step {} does not replay", step.step));
        }
        s = next;
    }
    if structure_digest(&s) != log.digest {
        return input("replayed structure has a different digest");
    }
    Ok(s)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TaskAudit {
    pub task: usize,
    pub label: String,
    pub checked: usize,
    pub realized: usize,
    /// A base copy with no strong extension copy over it.
    pub missing: Option<Vec<u32>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Audit {
    pub tasks: Vec<TaskAudit>,
}

impl Audit {
    pub fn checked(&self) -> usize {
        self.tasks.iter().map(|t| t.checked).sum()
    }

    pub fn realized(&self) -> usize {
        self.tasks.iter().map(|t| t.realized).sum()
    }

    /// Fraction realized; 1 when nothing was checked.
    pub fn ratio(&self) -> f64 {
        match self.checked() {
            0 => 1.0,
            c => self.realized() as f64 / c as f64,
        }
    }
}

/// For each task and each of the first `cap_per_task` strong copies of its
/// base in `s`, whether a strong copy of the extension sits over it.
pub fn audit_extension_property(s: &FiniteStructure, tasks: &[ExtensionTask], cap_per_task: usize) -> Result<Audit> {
    let mut out = Vec::new();
    for (ti, task) in tasks.iter().enumerate() {
        let mode = task.class.embed_mode();
        let base = task.base_pattern();
        let ext = &task.extension;
        let mut audit = TaskAudit {
            task: ti,
            label: task.label(),
            checked: 0,
            realized: 0,
            missing: None,
        };
        for e in embeddings(s, &base, &[], usize::MAX)? {
            if audit.checked == cap_per_task {
                break;
            }
            if !image_accepted(s, &e, mode)? {
                continue;
            }
            audit.checked += 1;
            let fixed: Vec<(usize, usize)> = (0..base.len()).map(|q| (ext.pos(base.id(q)).unwrap(), e[q])).collect();
            let mut found = false;
            for f in embeddings(s, ext, &fixed, usize::MAX)? {
                if image_accepted(s, &f, mode)? {
                    found = true;
                    break;
                }
            }
            if found {
                audit.realized += 1;
            } else if audit.missing.is_none() {
                audit.missing = Some(s.ids_of(&image(s, &e)));
            }
        }
        out.push(audit);
    }
    Ok(Audit { tasks: out })
}

/// Strong copies of `pattern` in `s`, as in [`crate::find_sese_embeddings`]
/// with the class's notion of strong.
pub fn strong_copies(s: &FiniteStructure, pattern: &FiniteStructure, class: ClassTag) -> Result<Vec<Embedding>> {
    let mut out = Vec::new();
    for e in embeddings(s, pattern, &[], usize::MAX)? {
        if image_accepted(s, &e, class.embed_mode())? {
            out.push(e);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c0() -> Class {
        Class::c0(Signature::single(2, 1, 2).unwrap())
    }

    #[test]
    fn small_classes() {
        let caps = Caps::default();
        assert_eq!(enumerate_class(&c0(), 0, &caps).unwrap().len(), 1);
        assert_eq!(enumerate_class(&c0(), 2, &caps).unwrap().len(), 4);
        // graphs on at most 3 vertices: 1 + 1 + 2 + 4
        assert_eq!(enumerate_class(&c0(), 3, &caps).unwrap().len(), 8);
        let cf = Class::cf(Signature::single(2, 1, 2).unwrap(), ControlFunction::harmonic(2));
        let list = enumerate_class(&cf, 3, &caps).unwrap();
        assert_eq!(list.len(), 7);
        assert!(list.iter().all(|s| s.instance_count() < 3));
        // K_3 patterns up to 4 vertices: bipartite graphs without short cycles
        let kn = Class::kn(3).unwrap();
        assert!(enumerate_class(&kn, 4, &caps)
            .unwrap()
            .iter()
            .all(|s| s.signature().mode() == Mode::Bipartite));
    }

    #[test]
    fn c0_counts_match_graph_counts() {
        // C0 for (2,1,2) holds for every graph on at most 4 vertices (delta >= 2)
        let caps = Caps::default();
        assert_eq!(enumerate_class(&c0(), 4, &caps).unwrap().len(), 1 + 1 + 2 + 4 + 11);
    }

    #[test]
    fn budget_one_gives_a_vertex() {
        let config = BuildConfig {
            class: c0(),
            max_pattern: 1,
            budget: 1,
            seed: 0,
        };
        let (s, log) = build_generic(&config, &Caps::default()).unwrap();
        assert_eq!(s.len(), 1);
        assert_eq!(log.steps.len(), 1);
    }

    #[test]
    fn builds_are_deterministic_and_replay() {
        let caps = Caps::default();
        let config = BuildConfig {
            class: c0(),
            max_pattern: 3,
            budget: 50,
            seed: 7,
        };
        let (s, log) = build_generic(&config, &caps).unwrap();
        let (s2, log2) = build_generic(&config, &caps).unwrap();
        assert_eq!(s, s2);
        assert_eq!(log.to_json(), log2.to_json());
        assert_eq!(replay(&config, &log, &caps).unwrap(), s);
        assert_eq!(BuildLog::from_json(&log.to_json()).unwrap(), log);
        let mut bad = log.clone();
        bad.steps[3].over = vec![];
        assert!(replay(&config, &bad, &caps).is_err());
    }

    #[test]
    fn audit_controls() {
        let caps = Caps::default();
        let tasks = enumerate_tasks(&c0(), 1, &caps).unwrap();
        assert_eq!(tasks.len(), 1);
        let empty = FiniteStructure::empty(Signature::single(2, 1, 2).unwrap());
        let a = audit_extension_property(&empty, &tasks, 10).unwrap();
        assert_eq!((a.checked(), a.realized()), (1, 0));
        let two = enumerate_tasks(&c0(), 2, &caps).unwrap();
        let nonempty: Vec<ExtensionTask> = two.into_iter().filter(|t| !t.base.is_empty()).collect();
        assert_eq!(audit_extension_property(&empty, &nonempty, 10).unwrap().ratio(), 1.0);
    }

    #[test]
    fn audit_is_monotone_in_the_budget() {
        let caps = Caps::default();
        let tasks: Vec<ExtensionTask> = enumerate_tasks(&c0(), 3, &caps)
            .unwrap()
            .into_iter()
            .filter(|t| t.base.len() <= 1)
            .collect();
        let mut last = 0.0;
        for budget in [0, 10, 30, 60] {
            let config = BuildConfig {
                class: c0(),
                max_pattern: 3,
                budget,
                seed: 1,
            };
            let (s, _) = build_generic(&config, &caps).unwrap();
            let r = audit_extension_property(&s, &tasks, 2).unwrap().ratio();
            assert!(r >= last, "budget {budget}: {r} < {last}");
            last = r;
        }
    }
}
