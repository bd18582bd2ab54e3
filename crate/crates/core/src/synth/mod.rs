//! Seeded synthetic matches calibrated to published label shares.
//!
//! The generative process is synthetic: only its marginals are tuned. Each
//! rally starts with a serve that may be an error or an ace; otherwise the
//! receiving side passes, sets and attacks, and every attack either ends the
//! rally or is dug by the other side, which then attacks in turn. The winner
//! follows from how the last round ended, and the winner serves next.
//!
//! Label shares are measured over attacking rounds. An overpass pass forces
//! `set=overpass hit=overpass` and a dump set forces `hit=dump`, so the hit
//! family of the remaining rounds is drawn from a conditional mix that puts
//! the overall family shares back on the profile's targets.
//!
//! Seeds: a match uses [`Rng`] seeded with its own seed; match `i` of a
//! corpus uses `derive_seed(master, i)`.

mod profile;

use crate::error::Result;
use crate::grid::{pass_rating_for, ZoneId};
use crate::model::{HitType, Level, Match, PassRating, Rally, Round, ServeType, SetLocation, SetSub, Team};
use crate::rng::{derive_seed, Rng};

pub use profile::{GeneratorProfile, HitMix, Rates, ReceiveWeights, ServeMix, SetMix};

const SET_LABELS: [SetLocation; 6] = [
    SetLocation::Outside,
    SetLocation::DBall,
    SetLocation::Oppo,
    SetLocation::Quick,
    SetLocation::Bic,
    SetLocation::Dump,
];
const SERVE_LABELS: [ServeType; 3] = [ServeType::Jump, ServeType::Float, ServeType::Hybrid];
const OUT_OF_SYSTEM_PASS: [u8; 7] = [6, 7, 8, 9, 10, 14, 15];
const JUNK: [HitType; 3] = [HitType::OffSpeed, HitType::RollShot, HitType::Tip];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Family {
    Hit,
    Blocked,
    Junk,
    Free,
}

/// How an attacking round ended.
enum Outcome {
    Kill,
    AttackError,
    BlockPoint,
    Continue,
}

fn zone(n: u8) -> ZoneId {
    ZoneId::new(n).expect("generator zones are in range")
}

fn in_bounds(rng: &mut Rng) -> ZoneId {
    zone(1 + rng.below(15) as u8)
}

fn out_of_bounds(rng: &mut Rng) -> ZoneId {
    zone(16 + rng.below(11) as u8)
}

struct Generator<'a> {
    profile: &'a GeneratorProfile,
    rng: Rng,
    /// Conditional hit-family weights for rounds that are neither overpass
    /// passes nor dump sets.
    family_weights: [f64; 4],
}

impl<'a> Generator<'a> {
    fn new(profile: &'a GeneratorProfile, seed: u64) -> Self {
        let h = &profile.hit_family;
        let q = profile.rates.overpass_pass;
        let dumps = (1.0 - q) * profile.set_location.dump;
        Self {
            profile,
            rng: Rng::new(seed),
            family_weights: [h.hit, h.blocked, (h.junk - dumps).max(0.0), (h.free - q).max(0.0)],
        }
    }

    fn serve_type(&mut self) -> ServeType {
        let s = &self.profile.serve_type;
        SERVE_LABELS[self.rng.categorical(&[s.jump, s.float, s.hybrid])]
    }

    fn receive_zone(&mut self, serve: ServeType) -> ZoneId {
        let w = &self.profile.receive_weights;
        let weights = match serve {
            ServeType::Jump => &w.jump,
            ServeType::Float => &w.float,
            ServeType::Hybrid => &w.hybrid,
        };
        zone(1 + self.rng.categorical(weights) as u8)
    }

    fn set_location(&mut self) -> SetLocation {
        let s = &self.profile.set_location;
        SET_LABELS[self.rng.categorical(&[s.outside, s.dball, s.oppo, s.quick, s.bic, s.dump])]
    }

    fn family(&mut self) -> Family {
        [Family::Hit, Family::Blocked, Family::Junk, Family::Free][self.rng.categorical(&self.family_weights)]
    }

    fn kill_rate(&self, set: SetLocation) -> f64 {
        let r = &self.profile.rates;
        let bonus = match set {
            SetLocation::Quick => 0.5,
            SetLocation::Bic => 0.3,
            SetLocation::DBall => -0.5,
            _ => 0.0,
        };
        (r.spike_kill * (1.0 + r.signal_strength * bonus)).clamp(0.0, 1.0 - r.spike_error)
    }

    /// Pass, set and attack for `round`, which already holds its reception.
    fn attack(&mut self, round: &mut Round, last: bool) -> Outcome {
        let rates = self.profile.rates.clone();
        if self.rng.bernoulli(rates.overpass_pass) {
            round.pass_rating = Some(PassRating::Overpass);
            round.set_location = SetLocation::Overpass;
            round.hit_type = HitType::Overpass;
            return self.loose_ball(round, last);
        }

        let pass_to = if self.rng.bernoulli(rates.in_system_pass) {
            zone(11 + self.rng.below(3) as u8)
        } else {
            zone(*self.rng.choose(&OUT_OF_SYSTEM_PASS))
        };
        round.pass_to = Some(pass_to);
        round.pass_rating = Some(pass_rating_for(pass_to, false));
        round.set_from = Some(pass_to);

        let set = self.set_location();
        round.set_location = set;
        let thirty_one = set == SetLocation::Quick && self.rng.bernoulli(rates.thirty_one_of_quick);
        if thirty_one {
            round.set_sub = Some(SetSub::ThirtyOne);
        }
        round.hit_from = Some(match set {
            SetLocation::Outside => zone(11),
            SetLocation::Oppo => zone(15),
            SetLocation::Quick if thirty_one => zone(14),
            SetLocation::Quick => zone(13),
            SetLocation::Bic => zone(8),
            SetLocation::DBall => zone(6),
            _ => pass_to,
        });

        let family = if set == SetLocation::Dump {
            Family::Junk
        } else {
            self.family()
        };
        match family {
            Family::Hit => {
                round.hit_type = HitType::Hit;
                round.num_blockers = [0, 1, 2, 3][self.rng.categorical(&[0.1, 0.3, 0.45, 0.15])];
                let kill = self.kill_rate(set);
                let u = self.rng.next_f64();
                if last || u < kill {
                    round.target = Some(in_bounds(&mut self.rng));
                    Outcome::Kill
                } else if u < kill + rates.spike_error {
                    round.target = Some(out_of_bounds(&mut self.rng));
                    Outcome::AttackError
                } else {
                    round.target = Some(in_bounds(&mut self.rng));
                    Outcome::Continue
                }
            }
            Family::Blocked => {
                round.hit_type = HitType::Blocked;
                round.num_blockers = 1 + self.rng.below(3) as u8;
                round.block_touch = true;
                if last || self.rng.bernoulli(rates.block_point) {
                    Outcome::BlockPoint
                } else {
                    round.target = Some(in_bounds(&mut self.rng));
                    Outcome::Continue
                }
            }
            Family::Junk => {
                round.hit_type = if set == SetLocation::Dump {
                    HitType::Dump
                } else {
                    *self.rng.choose(&JUNK)
                };
                round.num_blockers = self.rng.below(3) as u8;
                round.target = Some(in_bounds(&mut self.rng));
                if last || self.rng.bernoulli(rates.junk_kill) {
                    Outcome::Kill
                } else {
                    Outcome::Continue
                }
            }
            Family::Free => {
                round.hit_type = if self.rng.bernoulli(0.5) {
                    HitType::FreeBall
                } else {
                    HitType::Overpass
                };
                self.loose_ball(round, last)
            }
        }
    }

    /// A ball sent over without an attack: always playable, unless the rally
    /// has hit its length cap, in which case it goes out.
    fn loose_ball(&mut self, round: &mut Round, last: bool) -> Outcome {
        if last {
            round.target = Some(out_of_bounds(&mut self.rng));
            Outcome::AttackError
        } else {
            round.target = Some(in_bounds(&mut self.rng));
            Outcome::Continue
        }
    }

    fn rally(&mut self, rally_no: u32, server: Team) -> Rally {
        let rates = self.profile.rates.clone();
        let receiver = server.other();
        let mut first = Round::new(1, receiver);
        let serve = self.serve_type();
        first.serve_type = Some(serve);
        first.serve_from = Some(zone(17 + self.rng.below(5) as u8));

        let done = |winner: Team, win: &str, lose: &str, rounds: Vec<Round>| Rally {
            rally_no,
            winner,
            winning_reason: win.to_string(),
            losing_reason: lose.to_string(),
            rounds,
        };

        let u = self.rng.next_f64();
        if u < rates.service_error {
            return done(receiver, "opponent_error", "service_error", vec![first]);
        }
        let recv = self.receive_zone(serve);
        first.recv_at = Some(recv);
        first.recv_move_from = Some(recv);
        if u < rates.service_error + rates.ace {
            return done(server, "ace", "reception_error", vec![first]);
        }

        let mut rounds = Vec::new();
        let mut round = first;
        loop {
            let last = round.round_no >= rates.max_rounds;
            let team = round.team;
            let outcome = self.attack(&mut round, last);
            let target = round.target;
            let next_no = round.round_no + 1;
            rounds.push(round);
            match outcome {
                Outcome::Kill => return done(team, "kill", "dig_error", rounds),
                Outcome::AttackError => return done(team.other(), "opponent_error", "attack_error", rounds),
                Outcome::BlockPoint => return done(team.other(), "block", "blocked", rounds),
                Outcome::Continue => {
                    round = Round::new(next_no, team.other());
                    let dig = target.unwrap_or_else(|| in_bounds(&mut self.rng));
                    round.recv_at = Some(dig);
                    round.recv_move_from = Some(dig);
                }
            }
        }
    }
}

/// One synthetic match of `n_rallies` rallies, fully determined by the
/// arguments.
pub fn generate_match(profile: &GeneratorProfile, n_rallies: usize, seed: u64) -> Result<Match> {
    profile.validate()?;
    let mut g = Generator::new(profile, seed);
    let mut m = Match::new(format!("syn-{seed:016x}"), "Synthetic A", "Synthetic B");
    m.level = Level::Synthetic;
    let mut server = if g.rng.bernoulli(0.5) { Team::A } else { Team::B };
    for i in 0..n_rallies {
        let rally = g.rally(i as u32 + 1, server);
        server = rally.winner;
        m.rallies.push(rally);
    }
    Ok(m)
}

/// `n_matches` matches; match `i` is generated from `derive_seed(seed, i)`.
pub fn generate_corpus(
    profile: &GeneratorProfile,
    n_matches: usize,
    rallies_per_match: usize,
    seed: u64,
) -> Result<Vec<Match>> {
    (0..n_matches)
        .map(|i| generate_match(profile, rallies_per_match, derive_seed(seed, i as u64)))
        .collect()
}
