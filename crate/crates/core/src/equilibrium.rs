//! Equilibrium construction and exact best-response verification.

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::group::{Bijection, Element, Group, GroupKind};
use crate::integration::{deviation_function, payoff_nu, payoff_terms, OrderWeights, Term};
use crate::measure::Measure;
use crate::payoff::PayoffFn;
use crate::rational::{self, Rational};

/// A group game: player `i` receives `φ_i(Σ_{j ∈ P_i} η_j(x_j))`.
///
/// Players are numbered from 0 internally; neighborhoods are sorted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GameSpec {
    group: Group,
    phi: Vec<PayoffFn>,
    eta: Vec<Bijection>,
    neighborhoods: Vec<Vec<usize>>,
    nu: OrderWeights,
}

impl GameSpec {
    /// `neighborhoods = None` lets every player depend on everyone.
    pub fn new(
        group: Group,
        phi: Vec<PayoffFn>,
        eta: Vec<Bijection>,
        neighborhoods: Option<Vec<Vec<usize>>>,
        nu: OrderWeights,
    ) -> Result<Self> {
        let n = phi.len();
        if n < 2 {
            return Err(Error::InvalidGame(format!("need at least 2 players, got {n}")));
        }
        if eta.len() != n {
            return Err(Error::InvalidGame(format!("{} bijections for {n} players", eta.len())));
        }
        for (i, f) in phi.iter().enumerate() {
            f.check_group(&group)
                .map_err(|e| Error::InvalidGame(format!("phi of player {}: {e}", i + 1)))?;
        }
        for (i, e) in eta.iter().enumerate() {
            e.check_compatible(&group)
                .map_err(|err| Error::InvalidGame(format!("eta of player {}: {err}", i + 1)))?;
        }
        let neighborhoods = match neighborhoods {
            None => vec![(0..n).collect(); n],
            Some(hoods) => {
                if hoods.len() != n {
                    return Err(Error::InvalidGame(format!(
                        "{} neighborhoods for {n} players",
                        hoods.len()
                    )));
                }
                hoods
                    .into_iter()
                    .enumerate()
                    .map(|(i, mut h)| {
                        h.sort_unstable();
                        h.dedup();
                        if let Some(p) = h.iter().find(|&&p| p >= n) {
                            return Err(Error::InvalidGame(format!(
                                "neighborhood of player {} names unknown player {}",
                                i + 1,
                                p + 1
                            )));
                        }
                        if !h.contains(&i) {
                            return Err(Error::InvalidGame(format!(
                                "neighborhood of player {} must contain the player",
                                i + 1
                            )));
                        }
                        if h.len() < 2 {
                            return Err(Error::InvalidGame(format!(
                                "neighborhood of player {} needs another player",
                                i + 1
                            )));
                        }
                        Ok(h)
                    })
                    .collect::<Result<Vec<_>>>()?
            }
        };
        if nu.players() != n {
            return Err(Error::InvalidGame(format!(
                "order weights for {} players in a {n}-player game",
                nu.players()
            )));
        }
        Ok(GameSpec {
            group,
            phi,
            eta,
            neighborhoods,
            nu,
        })
    }

    pub fn group(&self) -> &Group {
        &self.group
    }

    pub fn players(&self) -> usize {
        self.phi.len()
    }

    pub fn phi(&self, i: usize) -> &PayoffFn {
        &self.phi[i]
    }

    pub fn phis(&self) -> &[PayoffFn] {
        &self.phi
    }

    pub fn eta(&self, j: usize) -> &Bijection {
        &self.eta[j]
    }

    pub fn etas(&self) -> &[Bijection] {
        &self.eta
    }

    pub fn neighborhood(&self, i: usize) -> &[usize] {
        &self.neighborhoods[i]
    }

    pub fn neighborhoods(&self) -> &[Vec<usize>] {
        &self.neighborhoods
    }

    /// True when every player depends on every other player.
    pub fn is_complete(&self) -> bool {
        self.neighborhoods.iter().all(|h| h.len() == self.players())
    }

    pub fn nu(&self) -> &OrderWeights {
        &self.nu
    }

    pub fn with_nu(&self, nu: OrderWeights) -> Result<Self> {
        GameSpec::new(
            self.group.clone(),
            self.phi.clone(),
            self.eta.clone(),
            Some(self.neighborhoods.clone()),
            nu,
        )
    }
}

/// One mixed strategy per player.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Profile {
    measures: Vec<Measure>,
}

impl Profile {
    pub fn new(measures: Vec<Measure>) -> Self {
        Profile { measures }
    }

    pub fn measures(&self) -> &[Measure] {
        &self.measures
    }

    pub fn validate(&self, game: &GameSpec) -> Result<()> {
        if self.measures.len() != game.players() {
            return Err(Error::InvalidMeasure(format!(
                "profile has {} strategies for {} players",
                self.measures.len(),
                game.players()
            )));
        }
        for (i, m) in self.measures.iter().enumerate() {
            m.validate(game.group())
                .map_err(|e| Error::InvalidMeasure(format!("player {}: {e}", i + 1)))?;
        }
        Ok(())
    }

    pub fn replace(&self, i: usize, m: Measure) -> Self {
        let mut measures = self.measures.clone();
        measures[i] = m;
        Profile { measures }
    }
}

/// Where `∫φ dλ` is maximized over invariant means.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ArgMax {
    /// The two-ended mean with this `λ(N)`.
    Theta(Rational),
    /// Every two-ended mean is optimal.
    AnyTheta,
    IntervalMean,
    Uniform,
}

/// The exact range `{∫φ dλ : λ invariant}` with its maximizers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IRange {
    pub lo: Rational,
    pub hi: Rational,
    pub argmax: ArgMax,
}

pub fn i_range(phi: &PayoffFn, group: &Group) -> Result<IRange> {
    phi.check_group(group)?;
    match phi {
        PayoffFn::Ep(f) => {
            let (a_minus, a_plus) = f.eventual_averages();
            let argmax = match a_plus.cmp(&a_minus) {
                std::cmp::Ordering::Greater => ArgMax::Theta(rational::one()),
                std::cmp::Ordering::Less => ArgMax::Theta(rational::zero()),
                std::cmp::Ordering::Equal => ArgMax::AnyTheta,
            };
            Ok(IRange {
                lo: a_minus.clone().min(a_plus.clone()),
                hi: a_minus.max(a_plus),
                argmax,
            })
        }
        PayoffFn::Step(f) => {
            let v = f.lebesgue();
            Ok(IRange {
                lo: v.clone(),
                hi: v,
                argmax: ArgMax::IntervalMean,
            })
        }
        PayoffFn::Table(t) => {
            let v = t.mean();
            Ok(IRange {
                lo: v.clone(),
                hi: v,
                argmax: ArgMax::Uniform,
            })
        }
        PayoffFn::Predicate(_) => Err(Error::Unsupported(
            "no exact invariant-mean range for Z² predicates; use the banach density sweep".into(),
        )),
    }
}

/// Each player takes a maximizer of `∫φ_i dλ` in the coordinates
/// `z_i = η_i(x_i)` and pulls it back through `η_i`. Ties on `Z` resolve to
/// `θ = 1/2`. The order weights are never consulted.
pub fn construct_equilibrium(game: &GameSpec) -> Result<Profile> {
    let group = game.group();
    if !group.is_finite() && !group.is_abelian() {
        return Err(Error::Unsupported(
            "equilibrium construction on infinite non-abelian groups".into(),
        ));
    }
    if !group.is_finite() && !matches!(group.kind(), GroupKind::Integers | GroupKind::RationalCircle) {
        return Err(Error::Unsupported(format!(
            "no symbolic invariant means on {}",
            group.tag()
        )));
    }
    let measures = (0..game.players())
        .map(|i| {
            let mean = match i_range(game.phi(i), group)?.argmax {
                ArgMax::Theta(theta) => Measure::TwoEnded(theta),
                ArgMax::AnyTheta => Measure::TwoEnded(rational::ratio(1, 2)),
                ArgMax::IntervalMean => Measure::IntervalMean,
                ArgMax::Uniform => Measure::Uniform,
            };
            mean.pushforward(game.eta(i))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Profile::new(measures))
}

/// `u_i^ν` with player `i`'s strategy replaced by `candidate`.
pub fn deviation_value(
    game: &GameSpec,
    profile: &Profile,
    i: usize,
    candidate: &Measure,
    nu: &OrderWeights,
) -> Result<Rational> {
    candidate.validate(game.group())?;
    payoff_nu(game, &profile.replace(i, candidate.clone()), nu, i)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Deviation {
    Pure(Element),
    Mean(Measure),
    /// The supremum over pure strategies is approached but not attained.
    Unattained,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GapEntry {
    pub player: usize,
    pub payoff: Rational,
    pub terms: Vec<Term>,
    pub best_deviation: Deviation,
    pub deviation_payoff: Rational,
    pub deviation_terms: Vec<Term>,
    pub gap: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GapReport {
    pub entries: Vec<GapEntry>,
    pub certified: bool,
}

/// Exact best representable deviation of player `i`.
///
/// Deviation payoffs are affine in the deviating strategy, so it suffices to
/// compare pure strategies (through the exact supremum of the deviation
/// function) with the extreme symbolic means.
pub fn best_response_gap(game: &GameSpec, profile: &Profile, i: usize, nu: &OrderWeights) -> Result<GapEntry> {
    profile.validate(game)?;
    let group = game.group();
    let terms = payoff_terms(game, profile, nu, i)?;
    let payoff: Rational = terms.iter().map(|t| &t.weight * &t.value).sum();

    let mut candidates: Vec<(Deviation, Rational)> = Vec::new();
    if group.is_finite() {
        for x in group.elements()? {
            let v = deviation_value(game, profile, i, &Measure::dirac(x.clone()), nu)?;
            candidates.push((Deviation::Pure(x), v));
        }
    } else {
        let symbolic = match group.kind() {
            GroupKind::Integers => vec![Measure::TwoEnded(rational::one()), Measure::TwoEnded(rational::zero())],
            GroupKind::RationalCircle => vec![Measure::IntervalMean],
            _ => {
                return Err(Error::Unsupported(format!(
                    "exact best responses on {}",
                    group.tag()
                )))
            }
        };
        for m in symbolic {
            let v = deviation_value(game, profile, i, &m, nu)?;
            candidates.push((Deviation::Mean(m), v));
        }
        let g = deviation_function(game, profile, nu, i)?;
        let (sup, witness) = g.sup()?;
        let deviation = match witness {
            Some(w) => Deviation::Pure(game.eta(i).inverse().apply(&w)?),
            None => Deviation::Unattained,
        };
        candidates.push((deviation, sup));
    }

    let (best_deviation, deviation_payoff) = candidates
        .into_iter()
        .reduce(|best, c| if c.1 > best.1 { c } else { best })
        .expect("at least one candidate");
    let deviation_terms = match &best_deviation {
        Deviation::Pure(x) => payoff_terms(game, &profile.replace(i, Measure::dirac(x.clone())), nu, i)?,
        Deviation::Mean(m) => payoff_terms(game, &profile.replace(i, m.clone()), nu, i)?,
        Deviation::Unattained => Vec::new(),
    };
    let gap = &deviation_payoff - &payoff;
    Ok(GapEntry {
        player: i,
        payoff,
        terms,
        best_deviation,
        deviation_payoff,
        deviation_terms,
        gap,
    })
}

/// Certified iff every player's gap is at most zero.
pub fn verify_equilibrium(game: &GameSpec, profile: &Profile, nu: &OrderWeights) -> Result<GapReport> {
    let entries = (0..game.players())
        .map(|i| best_response_gap(game, profile, i, nu))
        .collect::<Result<Vec<_>>>()?;
    let certified = entries.iter().all(|e| e.gap <= Rational::zero());
    Ok(GapReport { entries, certified })
}

/// Which `θ` maximizes `θ·A_+ + (1 − θ)·A_−`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ThetaRequirement {
    One,
    Zero,
    Any,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ZStructureEntry {
    pub player: usize,
    pub a_minus: Rational,
    pub a_plus: Rational,
    /// `λ(N)` of the player's mean in the coordinates `z = η(x)`.
    pub theta: Rational,
    pub required: ThetaRequirement,
    pub passes: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ZStructureReport {
    pub entries: Vec<ZStructureEntry>,
    pub passes: bool,
}

/// Checks that each player's two-ended mean sits on the tail where its own
/// payoff average is larger.
pub fn z_structure_check(game: &GameSpec, profile: &Profile) -> Result<ZStructureReport> {
    if !matches!(game.group().kind(), GroupKind::Integers) {
        return Err(Error::Unsupported("tail structure applies to games on Z".into()));
    }
    profile.validate(game)?;
    let entries = (0..game.players())
        .map(|i| {
            let (a_minus, a_plus) = game.phi(i).eventual_averages()?;
            let theta = match profile.measures()[i].pushforward(&game.eta(i).inverse())? {
                Measure::TwoEnded(t) => t,
                other => {
                    return Err(Error::Unsupported(format!(
                        "player {} plays a {} measure, not a two-ended mean",
                        i + 1,
                        other.tag()
                    )))
                }
            };
            let required = match a_plus.cmp(&a_minus) {
                std::cmp::Ordering::Greater => ThetaRequirement::One,
                std::cmp::Ordering::Less => ThetaRequirement::Zero,
                std::cmp::Ordering::Equal => ThetaRequirement::Any,
            };
            let passes = match required {
                ThetaRequirement::One => theta == rational::one(),
                ThetaRequirement::Zero => theta.is_zero(),
                ThetaRequirement::Any => true,
            };
            Ok(ZStructureEntry {
                player: i,
                a_minus,
                a_plus,
                theta,
                required,
                passes,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let passes = entries.iter().all(|e| e.passes);
    Ok(ZStructureReport { entries, passes })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::Sign;
    use crate::payoff::{EpFn, TableFn};
    use crate::rational::{int, ratio};

    fn wald(nu: OrderWeights) -> GameSpec {
        let phi1 = EpFn::new(1, vec![int(1)], vec![int(0)], 0, vec![ratio(1, 2)]).unwrap();
        let phi2 = phi1.scale(&int(-1));
        let phi2 = EpFn::linear_combination(&[(int(1), &phi2), (int(1), &EpFn::constant(int(1)))]).unwrap();
        GameSpec::new(
            Group::integers(),
            vec![phi1.into(), phi2.into()],
            vec![Bijection::Identity, Bijection::affine_z(Sign::Minus, 0)],
            None,
            nu,
        )
        .unwrap()
    }

    #[test]
    fn wald_constructed_profile() {
        let nu = OrderWeights::uniform(2).unwrap();
        let game = wald(nu.clone());
        let profile = construct_equilibrium(&game).unwrap();
        assert_eq!(
            profile.measures(),
            &[Measure::TwoEnded(int(1)), Measure::TwoEnded(int(1))]
        );
        let report = verify_equilibrium(&game, &profile, &nu).unwrap();
        assert!(report.certified);
        assert_eq!(report.entries[0].payoff, ratio(1, 2));
        assert_eq!(report.entries[1].payoff, ratio(1, 2));
        assert!(report.entries.iter().all(|e| e.gap.is_zero()));
        assert!(z_structure_check(&game, &profile).unwrap().passes);
    }

    #[test]
    fn wald_stated_profile_gap() {
        let nu = OrderWeights::uniform(2).unwrap();
        let game = wald(nu.clone());
        let stated = Profile::new(vec![Measure::TwoEnded(int(1)), Measure::TwoEnded(int(0))]);
        let report = verify_equilibrium(&game, &stated, &nu).unwrap();
        assert!(!report.certified);
        assert_eq!(report.entries[1].gap, ratio(1, 2));
        assert!(!z_structure_check(&game, &stated).unwrap().passes);
    }

    #[test]
    fn finite_matching_pennies() {
        let g = Group::cyclic(2).unwrap();
        let phi1 = TableFn::new(g.clone(), vec![int(-1), int(1)]).unwrap();
        let phi2 = TableFn::new(g.clone(), vec![int(1), int(-1)]).unwrap();
        let nu = OrderWeights::uniform(2).unwrap();
        let game = GameSpec::new(
            g,
            vec![phi1.into(), phi2.into()],
            vec![Bijection::Identity; 2],
            None,
            nu.clone(),
        )
        .unwrap();
        let profile = construct_equilibrium(&game).unwrap();
        assert_eq!(profile.measures(), &[Measure::Uniform, Measure::Uniform]);
        let report = verify_equilibrium(&game, &profile, &nu).unwrap();
        assert!(report.certified);
        assert!(report.entries.iter().all(|e| e.payoff.is_zero() && e.gap.is_zero()));
    }

    #[test]
    fn game_validation() {
        let nu = OrderWeights::uniform(2).unwrap();
        let f: PayoffFn = EpFn::indicator_naturals().into();
        assert!(GameSpec::new(Group::rational_circle(), vec![f.clone(), f.clone()], vec![Bijection::Identity; 2], None, nu.clone()).is_err());
        assert!(GameSpec::new(
            Group::integers(),
            vec![f.clone(), f.clone()],
            vec![Bijection::Identity; 2],
            Some(vec![vec![0], vec![0, 1]]),
            nu
        )
        .is_err());
    }
}
