// SPDX-License-Identifier: MIT OR Apache-2.0

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::Error;

/// Part-of-speech slot labels. N1/Det1 mark the agreement-triggering subject.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Tag {
    Det1,
    N1,
    Det2,
    N2,
    Comp,
    V,
    P,
    Conj,
    CompVP,
}

impl Tag {
    pub const ALL: [Tag; 9] = [
        Tag::Det1,
        Tag::N1,
        Tag::Det2,
        Tag::N2,
        Tag::Comp,
        Tag::V,
        Tag::P,
        Tag::Conj,
        Tag::CompVP,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Tag::Det1 => "Det1",
            Tag::N1 => "N1",
            Tag::Det2 => "Det2",
            Tag::N2 => "N2",
            Tag::Comp => "Comp",
            Tag::V => "V",
            Tag::P => "P",
            Tag::Conj => "Conj",
            Tag::CompVP => "CompVP",
        }
    }
}

impl fmt::Display for Tag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Tag {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Tag::ALL
            .into_iter()
            .find(|t| t.as_str() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown tag `{s}`")))
    }
}

/// Which lexicon list fills a verb slot or the target.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VerbClass {
    Intransitive,
    Transitive,
    Complement,
    /// Long-VP verbs with their fixed continuation.
    LongVp,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum TemplateKind {
    Simple,
    #[serde(rename = "IORC")]
    Iorc,
    #[serde(rename = "SC")]
    Sc,
    #[serde(rename = "PP")]
    Pp,
    #[serde(rename = "SRC")]
    Src,
    #[serde(rename = "ORC")]
    Orc,
    #[serde(rename = "SVP")]
    Svp,
    #[serde(rename = "LVP")]
    Lvp,
}

/// The ten evaluated template variants, in report column order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TemplateId {
    Simple,
    IorcNoThat,
    Iorc,
    Sc,
    Pp,
    Src,
    OrcNoThat,
    Orc,
    Svp,
    Lvp,
}

impl TemplateId {
    pub const ALL: [TemplateId; 10] = [
        TemplateId::Simple,
        TemplateId::IorcNoThat,
        TemplateId::Iorc,
        TemplateId::Sc,
        TemplateId::Pp,
        TemplateId::Src,
        TemplateId::OrcNoThat,
        TemplateId::Orc,
        TemplateId::Svp,
        TemplateId::Lvp,
    ];

    /// Command-line identifier.
    pub fn slug(self) -> &'static str {
        match self {
            TemplateId::Simple => "simple",
            TemplateId::IorcNoThat => "iorc-no-that",
            TemplateId::Iorc => "iorc",
            TemplateId::Sc => "sc",
            TemplateId::Pp => "pp",
            TemplateId::Src => "src",
            TemplateId::OrcNoThat => "orc-no-that",
            TemplateId::Orc => "orc",
            TemplateId::Svp => "svp",
            TemplateId::Lvp => "lvp",
        }
    }

    /// Human-readable column name.
    pub fn display_name(self) -> &'static str {
        match self {
            TemplateId::Simple => "Simple",
            TemplateId::IorcNoThat => "IORC (No That)",
            TemplateId::Iorc => "IORC",
            TemplateId::Sc => "SC",
            TemplateId::Pp => "PP",
            TemplateId::Src => "SRC",
            TemplateId::OrcNoThat => "ORC (No That)",
            TemplateId::Orc => "ORC",
            TemplateId::Svp => "SVP",
            TemplateId::Lvp => "LVP",
        }
    }

    pub fn template(self) -> Template {
        Template::builtin(self)
    }
}

impl fmt::Display for TemplateId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.display_name())
    }
}

impl FromStr for TemplateId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let needle = s.trim();
        TemplateId::ALL
            .into_iter()
            .find(|t| t.slug().eq_ignore_ascii_case(needle) || t.display_name() == needle)
            .ok_or_else(|| {
                let known: Vec<_> = TemplateId::ALL.iter().map(|t| t.slug()).collect();
                Error::InvalidArgument(format!(
                    "unknown template `{s}` (expected one of: {})",
                    known.join(", ")
                ))
            })
    }
}

/// A slot schema for one agreement construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Template {
    pub id: TemplateId,
    pub kind: TemplateKind,
    pub slots: Vec<Tag>,
    /// Set for the variants that drop the optional complementizer.
    pub omits_comp: bool,
    pub n1_slot: usize,
    /// The noun a preamble `V` agrees with, if the template has one.
    pub verb_agrees_with: Option<Tag>,
    pub verb_class: Option<VerbClass>,
    pub target_class: VerbClass,
    /// Targets must differ from the preamble verb (coordination templates).
    pub target_differs_from_verb: bool,
}

impl Template {
    pub fn builtin(id: TemplateId) -> Self {
        use Tag::*;
        let (kind, slots, omits_comp, agree, vclass, target): (_, Vec<Tag>, _, _, _, _) = match id {
            TemplateId::Simple => (
                TemplateKind::Simple,
                vec![Det1, N1],
                false,
                None,
                None,
                VerbClass::Intransitive,
            ),
            TemplateId::IorcNoThat => (
                TemplateKind::Iorc,
                vec![Det2, N2, Det1, N1],
                true,
                None,
                None,
                VerbClass::Transitive,
            ),
            TemplateId::Iorc => (
                TemplateKind::Iorc,
                vec![Det2, N2, Comp, Det1, N1],
                false,
                None,
                None,
                VerbClass::Transitive,
            ),
            TemplateId::Sc => (
                TemplateKind::Sc,
                vec![Det2, N2, V, Det1, N1],
                false,
                Some(N2),
                Some(VerbClass::Complement),
                VerbClass::Intransitive,
            ),
            TemplateId::Pp => (
                TemplateKind::Pp,
                vec![Det1, N1, P, Det2, N2],
                false,
                None,
                None,
                VerbClass::Intransitive,
            ),
            TemplateId::Src => (
                TemplateKind::Src,
                vec![Det1, N1, Comp, V, Det2, N2],
                false,
                Some(N1),
                Some(VerbClass::Transitive),
                VerbClass::Intransitive,
            ),
            TemplateId::OrcNoThat => (
                TemplateKind::Orc,
                vec![Det1, N1, Det2, N2, V],
                true,
                Some(N2),
                Some(VerbClass::Transitive),
                VerbClass::Intransitive,
            ),
            TemplateId::Orc => (
                TemplateKind::Orc,
                vec![Det1, N1, Comp, Det2, N2, V],
                false,
                Some(N2),
                Some(VerbClass::Transitive),
                VerbClass::Intransitive,
            ),
            TemplateId::Svp => (
                TemplateKind::Svp,
                vec![Det1, N1, V, Conj],
                false,
                Some(N1),
                Some(VerbClass::Intransitive),
                VerbClass::Intransitive,
            ),
            TemplateId::Lvp => (
                TemplateKind::Lvp,
                vec![Det1, N1, V, CompVP, Conj],
                false,
                Some(N1),
                Some(VerbClass::LongVp),
                VerbClass::LongVp,
            ),
        };
        let n1_slot = slots
            .iter()
            .position(|&t| t == N1)
            .expect("every template has N1");
        Template {
            id,
            kind,
            slots,
            omits_comp,
            n1_slot,
            verb_agrees_with: agree,
            verb_class: vclass,
            target_class: target,
            target_differs_from_verb: matches!(id, TemplateId::Svp | TemplateId::Lvp),
        }
    }

    pub fn has(&self, tag: Tag) -> bool {
        self.slots.contains(&tag)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn slot_sequences_follow_table() {
        use Tag::*;
        let expect: [(TemplateId, &[Tag]); 10] = [
            (TemplateId::Simple, &[Det1, N1]),
            (TemplateId::IorcNoThat, &[Det2, N2, Det1, N1]),
            (TemplateId::Iorc, &[Det2, N2, Comp, Det1, N1]),
            (TemplateId::Sc, &[Det2, N2, V, Det1, N1]),
            (TemplateId::Pp, &[Det1, N1, P, Det2, N2]),
            (TemplateId::Src, &[Det1, N1, Comp, V, Det2, N2]),
            (TemplateId::OrcNoThat, &[Det1, N1, Det2, N2, V]),
            (TemplateId::Orc, &[Det1, N1, Comp, Det2, N2, V]),
            (TemplateId::Svp, &[Det1, N1, V, Conj]),
            (TemplateId::Lvp, &[Det1, N1, V, CompVP, Conj]),
        ];
        for (id, slots) in expect {
            let t = id.template();
            assert_eq!(t.slots, slots, "{id}");
            assert_eq!(t.slots.iter().filter(|&&s| s == N1).count(), 1);
            assert_eq!(t.slots[t.n1_slot], N1);
        }
    }

    #[test]
    fn template_ids_parse_from_slug_and_name() {
        for id in TemplateId::ALL {
            assert_eq!(id.slug().parse::<TemplateId>().unwrap(), id);
            assert_eq!(id.display_name().parse::<TemplateId>().unwrap(), id);
        }
        assert!("nope".parse::<TemplateId>().is_err());
        assert_eq!("CompVP".parse::<Tag>().unwrap(), Tag::CompVP);
    }
}
