//! The JSON workspace file: named algebras, elements, subalgebras,
//! polynomials, filtrations, amalgam inputs, diagrams and families.
//!
//! Every section is an object keyed by name. Names are unique across the
//! whole file. An element or subalgebra may live in a declared algebra or in
//! the final algebra of a declared filtration.
//!
//! ```json
//! {
//!   "algebras": { "B": { "atoms": 4 } },
//!   "elements": { "a": { "algebra": "B", "atoms": [0, 1] } },
//!   "subalgebras": { "R": { "algebra": "B", "blocks": [[0, 1], [2, 3]] } },
//!   "polynomials": { "P": "x1 & !x2" },
//!   "filtrations": { "F": { "steps": [{ "r_blocks": [], "s_atoms": 2, "s_r_blocks": [[0, 1]] }] } }
//! }
//! ```

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::marker::PhantomData;
use std::path::Path;

use serde::de::{Error as _, MapAccess, Visitor};
use serde::{Deserialize, Deserializer, Serialize};
use tsf_core::filtration::StepSpec;
use tsf_core::{
    AmalgamInput, BoolPoly, Diagram, Element, FiniteAlgebra, Filtration, SubalgebraPartition, ATOM_CAPACITY,
};

use crate::CliError;

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WorkspaceSpec {
    #[serde(default, deserialize_with = "unique", skip_serializing_if = "BTreeMap::is_empty")]
    pub algebras: BTreeMap<String, AlgebraDecl>,
    #[serde(default, deserialize_with = "unique", skip_serializing_if = "BTreeMap::is_empty")]
    pub elements: BTreeMap<String, ElementDecl>,
    #[serde(default, deserialize_with = "unique", skip_serializing_if = "BTreeMap::is_empty")]
    pub subalgebras: BTreeMap<String, SubalgebraDecl>,
    /// Term strings over `x1, x2, …`.
    #[serde(default, deserialize_with = "unique", skip_serializing_if = "BTreeMap::is_empty")]
    pub polynomials: BTreeMap<String, String>,
    #[serde(default, deserialize_with = "unique", skip_serializing_if = "BTreeMap::is_empty")]
    pub filtrations: BTreeMap<String, FiltrationDecl>,
    #[serde(default, deserialize_with = "unique", skip_serializing_if = "BTreeMap::is_empty")]
    pub amalgams: BTreeMap<String, AmalgamDecl>,
    #[serde(default, deserialize_with = "unique", skip_serializing_if = "BTreeMap::is_empty")]
    pub diagrams: BTreeMap<String, DiagramDecl>,
    /// Families of element sets, for the dichotomy scan.
    #[serde(default, deserialize_with = "unique", skip_serializing_if = "BTreeMap::is_empty")]
    pub families: BTreeMap<String, FamilyDecl>,
    /// Families of finite sets of integers, for the sunflower search.
    #[serde(default, deserialize_with = "unique", skip_serializing_if = "BTreeMap::is_empty")]
    pub set_families: BTreeMap<String, Vec<BTreeSet<u64>>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraDecl {
    pub atoms: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ElementDecl {
    pub algebra: String,
    pub atoms: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SubalgebraDecl {
    pub algebra: String,
    pub blocks: Vec<Vec<usize>>,
}

fn one() -> usize {
    1
}

fn is_one(n: &usize) -> bool {
    *n == 1
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FiltrationDecl {
    #[serde(default = "one", skip_serializing_if = "is_one")]
    pub initial_atoms: usize,
    pub steps: Vec<StepSpec>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AmalgamDecl {
    /// Subalgebra name: `R` inside `A`.
    pub r_in_a: String,
    /// Subalgebra name: `R` inside `S`.
    pub r_in_s: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matching: Option<Vec<usize>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DiagramDecl {
    pub a: String,
    pub s: String,
    pub r: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FamilyDecl {
    pub algebra: String,
    /// Each member is a list of element names.
    pub members: Vec<Vec<String>>,
}

fn unique<'de, D, T>(d: D) -> Result<BTreeMap<String, T>, D::Error>
where
    D: Deserializer<'de>,
    T: Deserialize<'de>,
{
    struct UniqueMap<T>(PhantomData<T>);

    impl<'de, T: Deserialize<'de>> Visitor<'de> for UniqueMap<T> {
        type Value = BTreeMap<String, T>;

        fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
            f.write_str("an object keyed by unique names")
        }

        fn visit_map<A: MapAccess<'de>>(self, mut access: A) -> Result<Self::Value, A::Error> {
            let mut out = BTreeMap::new();
            while let Some((k, v)) = access.next_entry::<String, T>()? {
                if out.contains_key(&k) {
                    return Err(A::Error::custom(format!("duplicate name `{k}`")));
                }
                out.insert(k, v);
            }
            Ok(out)
        }
    }

    d.deserialize_map(UniqueMap(PhantomData))
}

impl WorkspaceSpec {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Spec(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text).map_err(|e| match e {
            CliError::Spec(m) => CliError::Spec(format!("{}: {m}", path.display())),
            other => other,
        })
    }

    /// Pretty JSON with a trailing newline.
    pub fn emit(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("spec values serialize");
        s.push('\n');
        s
    }

    fn names(&self) -> Vec<(&'static str, &String)> {
        let mut out = Vec::new();
        out.extend(self.algebras.keys().map(|k| ("algebras", k)));
        out.extend(self.elements.keys().map(|k| ("elements", k)));
        out.extend(self.subalgebras.keys().map(|k| ("subalgebras", k)));
        out.extend(self.polynomials.keys().map(|k| ("polynomials", k)));
        out.extend(self.filtrations.keys().map(|k| ("filtrations", k)));
        out.extend(self.amalgams.keys().map(|k| ("amalgams", k)));
        out.extend(self.diagrams.keys().map(|k| ("diagrams", k)));
        out.extend(self.families.keys().map(|k| ("families", k)));
        out.extend(self.set_families.keys().map(|k| ("set_families", k)));
        out
    }
}

/// A validated spec with its filtrations built.
#[derive(Debug)]
pub struct Workspace {
    spec: WorkspaceSpec,
    /// Build result per filtration; failures are kept for reporting.
    built: BTreeMap<String, Result<Filtration, (usize, String)>>,
}

fn violation(path: String, message: impl fmt::Display) -> CliError {
    CliError::Spec(format!("{path}: {message}"))
}

/// Builds step by step so a rejected step can be named.
pub fn build_filtration(decl: &FiltrationDecl, max_atoms: usize) -> Result<Filtration, (usize, String)> {
    let initial = FiniteAlgebra::new(decl.initial_atoms).map_err(|e| (0, e.to_string()))?;
    let mut f = Filtration::with_initial(initial, max_atoms);
    for (i, step) in decl.steps.iter().enumerate() {
        f.push_step(step.clone()).map_err(|e| (i, e.to_string()))?;
    }
    Ok(f)
}

impl Workspace {
    pub fn new(spec: WorkspaceSpec, max_atoms: usize) -> Result<Self, CliError> {
        let mut seen: BTreeMap<&String, &str> = BTreeMap::new();
        for (section, name) in spec.names() {
            if let Some(first) = seen.insert(name, section) {
                return Err(violation(format!("{section}.{name}"), format!("name already used in {first}")));
            }
        }
        let built = spec
            .filtrations
            .iter()
            .map(|(k, d)| (k.clone(), build_filtration(d, max_atoms)))
            .collect();
        let ws = Workspace { spec, built };
        ws.validate()?;
        Ok(ws)
    }

    pub fn empty() -> Self {
        Workspace { spec: WorkspaceSpec::default(), built: BTreeMap::new() }
    }

    pub fn spec(&self) -> &WorkspaceSpec {
        &self.spec
    }

    fn validate(&self) -> Result<(), CliError> {
        for (name, decl) in &self.spec.algebras {
            if decl.atoms == 0 || decl.atoms > ATOM_CAPACITY {
                return Err(violation(
                    format!("algebras.{name}.atoms"),
                    format!("atom count must be in 1..={ATOM_CAPACITY}, got {}", decl.atoms),
                ));
            }
        }
        for (name, decl) in &self.spec.elements {
            let alg = self.host(&decl.algebra, &format!("elements.{name}.algebra"))?;
            for (i, &a) in decl.atoms.iter().enumerate() {
                if a >= alg.atom_count() {
                    return Err(violation(
                        format!("elements.{name}.atoms[{i}]"),
                        format!("atom {a} out of range for the {}-atom algebra `{}`", alg.atom_count(), decl.algebra),
                    ));
                }
            }
        }
        for (name, decl) in &self.spec.subalgebras {
            let alg = self.host(&decl.algebra, &format!("subalgebras.{name}.algebra"))?;
            for (i, block) in decl.blocks.iter().enumerate() {
                for (j, &a) in block.iter().enumerate() {
                    if a >= alg.atom_count() {
                        return Err(violation(
                            format!("subalgebras.{name}.blocks[{i}][{j}]"),
                            format!("atom {a} out of range for the {}-atom algebra `{}`", alg.atom_count(), decl.algebra),
                        ));
                    }
                }
            }
            SubalgebraPartition::from_atom_lists(alg, &decl.blocks)
                .map_err(|e| violation(format!("subalgebras.{name}.blocks"), e))?;
        }
        for (name, text) in &self.spec.polynomials {
            BoolPoly::parse(text, None).map_err(|e| violation(format!("polynomials.{name}"), e))?;
        }
        for (name, decl) in &self.spec.filtrations {
            if decl.initial_atoms == 0 || decl.initial_atoms > ATOM_CAPACITY {
                return Err(violation(format!("filtrations.{name}.initial_atoms"), "atom count out of range"));
            }
        }
        for (name, decl) in &self.spec.amalgams {
            let path = format!("amalgams.{name}");
            let a = self.subalgebra_at(&decl.r_in_a, &format!("{path}.r_in_a"))?;
            let s = self.subalgebra_at(&decl.r_in_s, &format!("{path}.r_in_s"))?;
            let k = a.block_count();
            AmalgamInput::new(a, s, decl.matching.clone().unwrap_or_else(|| (0..k).collect()))
                .map_err(|e| violation(path, e))?;
        }
        for (name, decl) in &self.spec.diagrams {
            let path = format!("diagrams.{name}");
            let a = self.subalgebra_at(&decl.a, &format!("{path}.a"))?;
            let s = self.subalgebra_at(&decl.s, &format!("{path}.s"))?;
            let r = self.subalgebra_at(&decl.r, &format!("{path}.r"))?;
            Diagram::new(a, s, r).map_err(|e| violation(path, e))?;
        }
        for (name, decl) in &self.spec.families {
            self.host(&decl.algebra, &format!("families.{name}.algebra"))?;
            for (i, member) in decl.members.iter().enumerate() {
                for (j, el) in member.iter().enumerate() {
                    let path = format!("families.{name}.members[{i}][{j}]");
                    let Some(e) = self.spec.elements.get(el) else {
                        return Err(violation(path, format!("unknown element `{el}`")));
                    };
                    if e.algebra != decl.algebra {
                        return Err(violation(path, format!("`{el}` lives in `{}`, not `{}`", e.algebra, decl.algebra)));
                    }
                }
            }
        }
        Ok(())
    }

    /// The algebra named `name`: a declared algebra or a filtration's final
    /// algebra.
    fn host(&self, name: &str, path: &str) -> Result<FiniteAlgebra, CliError> {
        if let Some(decl) = self.spec.algebras.get(name) {
            return FiniteAlgebra::new(decl.atoms).map_err(|e| violation(path.to_string(), e));
        }
        match self.built.get(name) {
            Some(Ok(f)) => Ok(f.algebra()),
            Some(Err((step, e))) => {
                Err(violation(path.to_string(), format!("filtration `{name}` fails at step {step}: {e}")))
            }
            None => Err(violation(path.to_string(), format!("unknown algebra `{name}`"))),
        }
    }

    pub fn algebra(&self, name: &str) -> Result<FiniteAlgebra, CliError> {
        self.host(name, name)
    }

    fn subalgebra_at(&self, name: &str, path: &str) -> Result<SubalgebraPartition, CliError> {
        let decl = self
            .spec
            .subalgebras
            .get(name)
            .ok_or_else(|| violation(path.to_string(), format!("unknown subalgebra `{name}`")))?;
        let alg = self.host(&decl.algebra, path)?;
        SubalgebraPartition::from_atom_lists(alg, &decl.blocks).map_err(|e| violation(path.to_string(), e))
    }

    pub fn subalgebra(&self, name: &str) -> Result<SubalgebraPartition, CliError> {
        self.subalgebra_at(name, name)
    }

    /// An element together with the name of its algebra.
    pub fn element(&self, name: &str) -> Result<(&str, Element), CliError> {
        let decl = self
            .spec
            .elements
            .get(name)
            .ok_or_else(|| CliError::Usage(format!("unknown element `{name}`")))?;
        Ok((&decl.algebra, Element::from_atoms(decl.atoms.iter().copied())))
    }

    /// Elements that must all live in the algebra `host`.
    pub fn elements_in(&self, names: &[String], host: &str) -> Result<Vec<Element>, CliError> {
        names
            .iter()
            .map(|n| {
                let (alg, e) = self.element(n)?;
                if alg != host {
                    return Err(CliError::Usage(format!("element `{n}` lives in `{alg}`, not `{host}`")));
                }
                Ok(e)
            })
            .collect()
    }

    /// A declared polynomial by name, or else `text` parsed as a term.
    pub fn polynomial(&self, text: &str, min_arity: Option<usize>) -> Result<BoolPoly, CliError> {
        let src = self.spec.polynomials.get(text).map_or(text, String::as_str);
        BoolPoly::parse(src, min_arity).map_err(|e| CliError::Usage(format!("polynomial `{text}`: {e}")))
    }

    pub fn filtration_decl(&self, name: &str) -> Result<&FiltrationDecl, CliError> {
        self.spec.filtrations.get(name).ok_or_else(|| CliError::Usage(format!("unknown filtration `{name}`")))
    }

    /// The built filtration, or the index and reason of its rejected step.
    pub fn filtration(&self, name: &str) -> Result<&Result<Filtration, (usize, String)>, CliError> {
        self.built.get(name).ok_or_else(|| CliError::Usage(format!("unknown filtration `{name}`")))
    }

    pub fn amalgam(&self, name: &str) -> Result<AmalgamInput, CliError> {
        let decl =
            self.spec.amalgams.get(name).ok_or_else(|| CliError::Usage(format!("unknown amalgam `{name}`")))?;
        let a = self.subalgebra(&decl.r_in_a)?;
        let s = self.subalgebra(&decl.r_in_s)?;
        let k = a.block_count();
        AmalgamInput::new(a, s, decl.matching.clone().unwrap_or_else(|| (0..k).collect()))
            .map_err(|e| CliError::Spec(format!("amalgams.{name}: {e}")))
    }

    pub fn diagram(&self, name: &str) -> Result<Diagram, CliError> {
        let decl =
            self.spec.diagrams.get(name).ok_or_else(|| CliError::Usage(format!("unknown diagram `{name}`")))?;
        Diagram::new(self.subalgebra(&decl.a)?, self.subalgebra(&decl.s)?, self.subalgebra(&decl.r)?)
            .map_err(|e| CliError::Spec(format!("diagrams.{name}: {e}")))
    }

    pub fn family(&self, name: &str) -> Result<(&str, Vec<Vec<Element>>), CliError> {
        let decl =
            self.spec.families.get(name).ok_or_else(|| CliError::Usage(format!("unknown family `{name}`")))?;
        let members = decl
            .members
            .iter()
            .map(|m| self.elements_in(m, &decl.algebra))
            .collect::<Result<_, _>>()?;
        Ok((&decl.algebra, members))
    }

    pub fn set_family(&self, name: &str) -> Result<&[BTreeSet<u64>], CliError> {
        self.spec
            .set_families
            .get(name)
            .map(Vec::as_slice)
            .ok_or_else(|| CliError::Usage(format!("unknown set family `{name}`")))
    }
}
