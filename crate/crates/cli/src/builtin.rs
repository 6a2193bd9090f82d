//! Named builtin games and profiles.

use groupgames::catalog;
use groupgames::rational::{int, ratio};
use groupgames::{GameSpec, Measure, Profile};

use crate::doc::GameDocument;

pub const GAMES: &[&str] = &["mp-finite", "rsp-finite", "mp-z", "wald", "rsp-q1", "cones-z2", "love-hate"];

pub fn game(name: &str) -> Option<GameDocument> {
    let game: GameSpec = match name {
        "mp-finite" => catalog::matching_pennies(),
        "rsp-finite" => catalog::rock_scissors_paper(),
        "mp-z" => catalog::matching_pennies_z(),
        "wald" => catalog::wald(),
        "rsp-q1" => catalog::rock_scissors_paper_q1(&ratio(1, 3), &ratio(2, 3)).ok()?,
        "cones-z2" => catalog::cones_z2(),
        "love-hate" => catalog::love_and_hate(2).ok()?,
        _ => return None,
    };
    Some(GameDocument { game, profile: None })
}

pub const PROFILES: &[&str] = &["uniform", "interval-means", "wald-constructed", "wald-stated", "mod2", "two-ended-half"];

/// Builtin profiles for `players` players.
pub fn profile(name: &str, players: usize) -> Option<Profile> {
    let p = match name {
        "uniform" => Profile::new(vec![Measure::Uniform; players]),
        "interval-means" => Profile::new(vec![Measure::IntervalMean; players]),
        "wald-constructed" => Profile::new(vec![Measure::TwoEnded(int(1)); 2]),
        "wald-stated" => catalog::wald_stated_profile(),
        "mod2" => catalog::mod2_profile(),
        "two-ended-half" => Profile::new(vec![Measure::TwoEnded(ratio(1, 2)); players]),
        _ => return None,
    };
    Some(p)
}
