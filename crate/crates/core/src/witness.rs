//! Failure witnesses and their replay.
//!
//! A witness is a kind followed by `key=value` fields, for example
//! `not-d-closed set={0,5}`. Sets are written as in [`ids_text`]. Most kinds
//! refer to the structure stored next to the witness in the report case.

use std::fmt;

use num_rational::BigRational;

use crate::builder::{audit_extension_property, build_generic, enumerate_tasks, BuildConfig, Class};
use crate::caps::Caps;
use crate::classes::{girth, in_kn};
use crate::closure::{cl0, cld, dim, dim_rel, DimTable};
use crate::control::ControlFunction;
use crate::error::{input, Error, Result};
use crate::examples::example_512_oracle_mismatch;
use crate::format;
use crate::gadget::BeattySequence;
use crate::independence::{axiom_suite, check_characterization, d_independent, perp};
use crate::predim::is_self_sufficient;
use crate::report::{ids_text, parse_ids, Case};
use crate::sa::msa_copies_over;
use crate::structure::{FiniteStructure, Signature};
use crate::suites::{beatty_property_holds, example_512_base, large_s_holds};
use crate::vertex_set::VertexSet;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub kind: String,
    pub fields: Vec<(String, String)>,
}

impl Witness {
    pub fn new(kind: &str) -> Self {
        Witness {
            kind: kind.into(),
            fields: Vec::new(),
        }
    }

    pub fn field(mut self, key: &str, value: impl fmt::Display) -> Self {
        self.fields.push((key.into(), value.to_string()));
        self
    }

    pub fn ids(self, key: &str, ids: &[u32]) -> Self {
        self.field(key, ids_text(ids))
    }

    pub fn set(self, key: &str, s: &FiniteStructure, set: &VertexSet) -> Self {
        self.ids(key, &s.ids_of(set))
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut words = text.split_whitespace();
        let kind = words.next().ok_or_else(|| Error::Input("empty witness".into()))?;
        let mut w = Witness::new(kind);
        for word in words {
            let (k, v) = word
                .split_once('=')
                .ok_or_else(|| Error::Input(format!("witness field {word:?} is not key=value")))?;
            w.fields.push((k.into(), v.into()));
        }
        Ok(w)
    }

    pub fn get(&self, key: &str) -> Result<&str> {
        self.fields
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
            .ok_or_else(|| Error::Input(format!("witness {} lacks field {key}", self.kind)))
    }

    fn num<T: std::str::FromStr>(&self, key: &str) -> Result<T> {
        self.get(key)?
            .parse()
            .map_err(|_| Error::Input(format!("witness field {key} is not a number")))
    }

    fn id_list(&self, key: &str) -> Result<Vec<u32>> {
        parse_ids(self.get(key)?).ok_or_else(|| Error::Input(format!("witness field {key} is not a set")))
    }

    fn vset(&self, s: &FiniteStructure, key: &str) -> Result<VertexSet> {
        s.set_of(&self.id_list(key)?)
    }
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.kind)?;
        for (k, v) in &self.fields {
            write!(f, " {k}={v}")?;
        }
        Ok(())
    }
}

fn rational(text: &str) -> Result<BigRational> {
    text.parse().map_err(|_| Error::Input(format!("bad rational {text:?}")))
}

/// Re-evaluates the failure recorded in a case. `Ok(true)` means the
/// failure is reproduced.
pub fn replay_case(case: &Case, caps: &Caps) -> Result<bool> {
    let text = case
        .witness
        .as_deref()
        .ok_or_else(|| Error::Input(format!("case {} has no witness", case.key)))?;
    let doc = case.structure.as_deref().map(format::parse).transpose()?;
    replay(&Witness::parse(text)?, doc.as_ref().map(|d| &d.structure), caps)
}

pub fn replay(w: &Witness, s: Option<&FiniteStructure>, caps: &Caps) -> Result<bool> {
    let need = || s.ok_or_else(|| Error::Input(format!("witness {} needs a structure", w.kind)));
    let out = match w.kind.as_str() {
        "beatty" => {
            let period: Vec<u8> = w.get("period")?.bytes().map(|c| c.wrapping_sub(b'0')).collect();
            let seq = BeattySequence {
                ell: w.num("l")?,
                b: w.num("b")?,
                period,
            };
            if seq.period.len() != seq.b as usize || seq.b == 0 {
                return input("beatty witness: period length differs from b");
            }
            !beatty_property_holds(&seq, w.get("property")?, w.num("i")?, w.num("s")?)?
        }
        "gadget-clause1" => {
            let y = need()?;
            let x = w.vset(y, "x")?;
            y.delta_rel(&y.all(), &x) != -1 || x.len() < 2
        }
        "gadget-clause2" => {
            let y = need()?;
            let (x, u) = (w.vset(y, "x")?, w.vset(y, "u")?);
            !x.is_subset(&u) && !is_self_sufficient(y, &u.intersection(&x), &u)?.holds
        }
        "gadget-clause3" => {
            let y = need()?;
            let (x, z) = (w.vset(y, "x")?, w.vset(y, "z")?);
            x.is_subset(&z) && z != y.all() && y.delta(&z) < y.delta(&x)
        }
        "not-strong" => {
            let s = need()?;
            !is_self_sufficient(s, &w.vset(s, "set")?, &s.all())?.holds
        }
        "cld-table-differs" => {
            let s = need()?;
            let x = w.vset(s, "set")?;
            let table = DimTable::new(s, caps.subset)?;
            DimTable::mask_of(&cld(s, &x)?) != table.cld(DimTable::mask_of(&x))
        }
        "axiom" => {
            let s = need()?;
            let sets: Vec<Vec<u32>> = (0..)
                .map_while(|i| w.get(&format!("s{i}")).ok())
                .map(|t| parse_ids(t).ok_or_else(|| Error::Input("axiom witness: bad set".into())))
                .collect::<Result<_>>()?;
            let axiom = w.get("axiom")?;
            axiom_suite(s, w.num("cap")?)?
                .violations
                .iter()
                .any(|v| v.axiom == axiom && v.sets == sets)
        }
        "audit-decrease" => {
            let s = need()?;
            let sig = s.signature().clone();
            let class = Class::c0(sig);
            let tasks = enumerate_tasks(&class, w.num("max_pattern")?, caps)?;
            let cap: usize = w.num("cap")?;
            let mut ratios = Vec::new();
            for key in ["small", "large"] {
                let config = BuildConfig {
                    class: class.clone(),
                    max_pattern: w.num("max_pattern")?,
                    budget: w.num(key)?,
                    seed: w.num("seed")?,
                };
                let (b, _) = build_generic(&config, caps)?;
                ratios.push(audit_extension_property(&b, &tasks, cap)?.ratio());
            }
            ratios[1] < ratios[0]
        }
        "not-d-closed" => {
            let s = need()?;
            let x = w.vset(s, "set")?;
            cld(s, &x)? != x
        }
        "d-closed" => {
            let s = need()?;
            let x = w.vset(s, "set")?;
            cld(s, &x)? == x
        }
        "dim-drop" => {
            let s = need()?;
            let (c, a0, rest) = (w.vset(s, "c")?, w.vset(s, "a0")?, w.vset(s, "rest")?);
            dim_rel(s, &c, &a0.union(&rest))? != dim_rel(s, &c, &a0)? - 1
        }
        "delta-below" => {
            let s = need()?;
            BigRational::from_integer(s.delta(&w.vset(s, "set")?).into()) < rational(w.get("bound")?)?
        }
        "dim-below" => {
            let s = need()?;
            dim(s, &w.vset(s, "set")?)? < w.num::<i64>("bound")?
        }
        "delta-differs" => {
            let s = need()?;
            s.delta(&w.vset(s, "set")?) != w.num::<i64>("claimed")?
        }
        "dim-differs" => {
            let s = need()?;
            dim(s, &w.vset(s, "set")?)? != w.num::<i64>("claimed")?
        }
        "cl0-differs" => {
            let s = need()?;
            cl0(s, &w.vset(s, "set")?)?.closure != w.vset(s, "claimed")?
        }
        "cld-differs" => {
            let s = need()?;
            cld(s, &w.vset(s, "set")?)? != w.vset(s, "claimed")?
        }
        "not-perp" => {
            let s = need()?;
            !perp(s, &w.vset(s, "b")?, &w.vset(s, "a")?, &w.vset(s, "c")?)?
        }
        "not-in-closure" => {
            let s = need()?;
            !w.vset(s, "y")?.is_subset(&cld(s, &w.vset(s, "x")?)?)
        }
        "log-bound" => {
            let (r, ya, k): (f64, f64, f64) = (w.num("r")?, w.num("ya")?, w.num("k")?);
            let yb1 = ya + k;
            r - 2.0 < ((yb1 + (r - 2.0) * k) / (yb1 - 1.0)).ln()
        }
        "girth-below" => girth(need()?).is_some_and(|g| g < w.num::<usize>("bound").unwrap_or(0)),
        "half-bound" => {
            let s = need()?;
            let x = w.vset(s, "set")?;
            2 * s.delta(&x) < x.len() as i64 + 3
        }
        "closure-bound" => {
            let s = need()?;
            let x = w.vset(s, "set")?;
            let xc = x.iter().filter(|&p| s.id(p) % 2 == 0).count() as i64;
            x.len() as i64 > 4 * xc - 3
        }
        "msa-copies" => {
            let s = need()?;
            let z = w.vset(s, "z")?;
            let bound = s.delta(&z);
            msa_copies_over(s, &z, w.num("max_new")?)?
                .iter()
                .any(|(_, copies)| copies.len() as i64 > bound)
        }
        "submod-1" => {
            let s = need()?;
            let (x, y) = (w.vset(s, "x")?, w.vset(s, "y")?);
            s.delta(&x.union(&y)) + s.delta(&x.intersection(&y)) > s.delta(&x) + s.delta(&y)
        }
        "submod-2" => {
            let s = need()?;
            let (a, b, x) = (w.vset(s, "a")?, w.vset(s, "b")?, w.vset(s, "x")?);
            a.is_subset(&b)
                && x.is_subset(&b)
                && is_self_sufficient(s, &a, &b)?.holds
                && !is_self_sufficient(s, &a.intersection(&x), &x)?.holds
        }
        "submod-3" => {
            let s = need()?;
            let (a, b, c) = (w.vset(s, "a")?, w.vset(s, "b")?, w.vset(s, "c")?);
            a.is_subset(&b)
                && b.is_subset(&c)
                && is_self_sufficient(s, &a, &b)?.holds
                && is_self_sufficient(s, &b, &c)?.holds
                && !is_self_sufficient(s, &a, &c)?.holds
        }
        "indep-differs" => {
            let s = need()?;
            let claimed: bool = w
                .get("claimed")?
                .parse()
                .map_err(|_| Error::Input("claimed must be true or false".into()))?;
            d_independent(s, &w.vset(s, "a")?, &w.vset(s, "b")?, &w.vset(s, "c")?)? != claimed
        }
        "charact-differs" => {
            let s = need()?;
            let (a, b, c) = (w.vset(s, "a")?, w.vset(s, "b")?, w.vset(s, "c")?);
            d_independent(s, &a, &b, &c)? != check_characterization(s, &a, &b, &c)?.holds()
        }
        "audit-missing" => {
            let s = need()?;
            let sig = Signature::single(w.num("n")?, w.num("m")?, w.num("r")?)?;
            let tasks = enumerate_tasks(&Class::c0(sig), w.num("max_pattern")?, caps)?;
            let task = tasks
                .get(w.num::<usize>("task")?)
                .ok_or_else(|| Error::Input("audit witness names an unknown task".into()))?;
            let audit = audit_extension_property(s, std::slice::from_ref(task), usize::MAX)?;
            audit.realized() < audit.checked()
        }
        "build-nondeterministic" => {
            let sig = Signature::single(w.num("n")?, w.num("m")?, w.num("r")?)?;
            let config = BuildConfig {
                class: Class::c0(sig),
                max_pattern: w.num("max_pattern")?,
                budget: w.num("budget")?,
                seed: w.num("seed")?,
            };
            let (s1, l1) = build_generic(&config, caps)?;
            let (s2, l2) = build_generic(&config, caps)?;
            s1 != s2 || l1.to_json() != l2.to_json()
        }
        "kn-accepted" => in_kn(need()?, w.num("ngon")?, caps)?.accepted(),
        "kn-rejected" => !in_kn(need()?, w.num("ngon")?, caps)?.accepted(),
        "control" => {
            let f = ControlFunction::parse(w.get("f")?, w.num("n")?)?;
            f.check_good(w.num("max")?).is_err()
        }
        "ex512-oracle" => {
            let (b, a, p) = example_512_base(w.get("variant")?)?;
            example_512_oracle_mismatch(w.num("s")?, w.num("ell")?, &b, &a, p)?.is_some()
        }
        "large-s" => {
            let (b, a, _) = example_512_base(w.get("variant")?)?;
            !large_s_holds(&b, &a, &ControlFunction::harmonic(2), w.num("s")?)?
        }
        other => return input(format!("unknown witness kind {other}")),
    };
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let w = Witness::new("cld-differs")
            .ids("set", &[0, 3])
            .field("claimed", "{0,1,3}");
        assert_eq!(w.to_string(), "cld-differs set={0,3} claimed={0,1,3}");
        assert_eq!(Witness::parse(&w.to_string()).unwrap(), w);
        assert!(Witness::parse("").is_err());
        assert!(Witness::parse("kind novalue").is_err());
    }

    #[test]
    fn replays_a_closed_pair() {
        let p = FiniteStructure::graph(2, 1, 3, &[(0, 1), (1, 2)]).unwrap();
        let open = Witness::new("not-d-closed").ids("set", &[0, 2]);
        assert!(replay(&open, Some(&p), &Caps::default()).unwrap());
        let closed = Witness::new("d-closed").ids("set", &[0, 2]);
        let cut = p.without_instance(0, &[0, 1]).unwrap();
        assert!(replay(&closed, Some(&cut), &Caps::default()).unwrap());
        assert!(replay(&closed, None, &Caps::default()).is_err());
        assert!(replay(&Witness::new("no-such-kind"), Some(&p), &Caps::default()).is_err());
    }
}
