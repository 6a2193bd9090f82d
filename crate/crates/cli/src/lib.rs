//! Command-line front end for the group-game solver: document parsing and
//! emission, reports, sweeps and demos.

pub mod builtin;
pub mod demo;
pub mod doc;
pub mod report;
pub mod sweep;

use std::path::Path;

use anyhow::{anyhow, Context};
use groupgames::Profile;

use crate::doc::{parse_game, parse_json, parse_profile, GameDocument};

/// Loads `builtin:NAME` or a JSON game document from a file.
pub fn load_game(source: &str) -> anyhow::Result<GameDocument> {
    if let Some(name) = source.strip_prefix("builtin:") {
        return builtin::game(name).ok_or_else(|| {
            anyhow!("unknown builtin game `{name}`; expected one of {}", builtin::GAMES.join(", "))
        });
    }
    let text = read(source)?;
    let value = parse_json(&text).with_context(|| format!("in {source}"))?;
    parse_game(&value).with_context(|| format!("in {source}"))
}

/// Loads `builtin:NAME` or a JSON profile document for `doc`'s game.
pub fn load_profile(doc: &GameDocument, source: &str) -> anyhow::Result<Profile> {
    let profile = if let Some(name) = source.strip_prefix("builtin:") {
        builtin::profile(name, doc.game.players()).ok_or_else(|| {
            anyhow!("unknown builtin profile `{name}`; expected one of {}", builtin::PROFILES.join(", "))
        })?
    } else {
        let text = read(source)?;
        let value = parse_json(&text).with_context(|| format!("in {source}"))?;
        parse_profile(&doc.game, &value, "").with_context(|| format!("in {source}"))?
    };
    profile.validate(&doc.game).with_context(|| format!("profile {source}"))?;
    Ok(profile)
}

fn read(source: &str) -> anyhow::Result<String> {
    std::fs::read_to_string(Path::new(source)).with_context(|| format!("cannot read {source}"))
}
