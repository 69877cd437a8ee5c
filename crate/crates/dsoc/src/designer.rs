//! Link design: modulation-order selection, code-rate selection,
//! required-power solving, and the exhaustive parameter search over
//! `(M, T_slot, R_ecc)` combinations.
//!
//! The search mirrors standard deep-space practice: enumerate all allowed
//! parameter combinations, compute the achievable coded rate and the soft
//! capacity for each, and keep the highest-rate combination whose
//! margin-loaded rate stays below the coding-discounted capacity — no
//! per-combination coded BER evaluations required.

use crate::capacity::{ppm_pc_capacity, saturation_rate_bps, OperatingPoint, PowerTap};
use crate::ppm::{PpmConfig, PpmOrder};
use crate::quantities::{DecibelLoss, PhotonEnergyJ, PowerW};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DesignError {
    #[error("order set must not be empty")]
    EmptyOrderSet,
    #[error("target rate must be positive, got {0} bits/s")]
    NonPositiveTarget(f64),
    #[error(
        "target rate {target_bps} bits/s exceeds the uncoded peak {peak_bps} bits/s of M={order}, T_slot={slot_s}s"
    )]
    TargetExceedsPeak { target_bps: f64, peak_bps: f64, order: u32, slot_s: f64 },
    #[error("target rate {target_bps} bits/s is at or above the capacity saturation {saturation_bps} bits/s")]
    TargetAtSaturation { target_bps: f64, saturation_bps: f64 },
    #[error("bisection bracket [{lo} W, {hi} W] does not enclose the target rate")]
    BracketDoesNotEnclose { lo: f64, hi: f64 },
}

/// Lowest and highest received power considered by [`required_power`].
pub const POWER_BRACKET_W: (f64, f64) = (1e-20, 1e-3);

/// Relative tolerance of the [`required_power`] bisection.
pub const POWER_TOLERANCE: f64 = 1e-4;

/// Allowed code rates for the search: an explicit list, or any value in
/// (0, 1].
#[derive(Debug, Clone, PartialEq)]
pub enum RateSet {
    Discrete(Vec<f64>),
    Continuous,
}

/// The candidate grid and feasibility margins for a design search.
#[derive(Debug, Clone, PartialEq)]
pub struct DesignConstraints {
    pub target_rate_bps: f64,
    pub order_set: Vec<PpmOrder>,
    pub slot_set_s: Vec<f64>,
    pub rate_set: RateSet,
    /// Gap between a practical code and the capacity-achieving ideal;
    /// discounts the capacity in the feasibility test.
    pub coding_efficiency: DecibelLoss,
    /// Design headroom loaded onto the candidate rate in the feasibility
    /// test.
    pub link_margin: DecibelLoss,
}

/// A selected operating combination.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DesignSolution {
    pub order: PpmOrder,
    pub slot_time_s: f64,
    pub code_rate: f64,
    pub achieved_rate_bps: f64,
    pub capacity_bps: f64,
    pub required_power: Option<PowerW>,
    pub feasible: bool,
}

fn capacity_at(pr: PowerW, pn: PowerW, e: PhotonEnergyJ, order: PpmOrder, slot_s: f64) -> f64 {
    let ppm = PpmConfig::uncoded(order, slot_s).expect("validated slot time");
    let op = OperatingPoint {
        received_power: pr,
        noise_power: pn,
        photon_energy: e,
        ppm,
        power_tap: PowerTap::PreDetector,
    };
    ppm_pc_capacity(&op).capacity_bps
}

/// The order in `order_set` whose capacity at `(pr, pn)` is largest, ties
/// broken toward the smaller order.
pub fn optimal_order(
    pr: PowerW,
    pn: PowerW,
    slot_time_s: f64,
    photon_energy: PhotonEnergyJ,
    order_set: &[PpmOrder],
) -> Result<PpmOrder, DesignError> {
    let mut sorted: Vec<PpmOrder> = order_set.to_vec();
    sorted.sort();
    sorted.dedup();
    // Ascending iteration plus strict improvement keeps ties on the
    // smaller order.
    let mut best: Option<(PpmOrder, f64)> = None;
    for order in sorted {
        let c = capacity_at(pr, pn, photon_energy, order, slot_time_s);
        match best {
            Some((_, c_best)) if c <= c_best => {}
            _ => best = Some((order, c)),
        }
    }
    best.map(|(order, _)| order).ok_or(DesignError::EmptyOrderSet)
}

/// Code rate that hits a target data rate with a given order and slot time:
/// `R_ecc = target · M · T_slot / log2(M)`.
pub fn ecc_rate_for_target(
    target_rate_bps: f64,
    order: PpmOrder,
    slot_time_s: f64,
) -> Result<f64, DesignError> {
    if !target_rate_bps.is_finite() || target_rate_bps <= 0.0 {
        return Err(DesignError::NonPositiveTarget(target_rate_bps));
    }
    let peak = order.bits_per_symbol() / (f64::from(order.get()) * slot_time_s);
    let rate = target_rate_bps / peak;
    if rate > 1.0 + 1e-12 {
        return Err(DesignError::TargetExceedsPeak {
            target_bps: target_rate_bps,
            peak_bps: peak,
            order: order.get(),
            slot_s: slot_time_s,
        });
    }
    Ok(rate.min(1.0))
}

/// The unique received power at which the soft capacity equals the target
/// rate, found by bisection on [`POWER_BRACKET_W`] to [`POWER_TOLERANCE`]
/// relative width. Uniqueness follows from strict monotonicity of the
/// capacity in received power below saturation.
pub fn required_power(
    target_rate_bps: f64,
    order: PpmOrder,
    slot_time_s: f64,
    pn: PowerW,
    photon_energy: PhotonEnergyJ,
) -> Result<PowerW, DesignError> {
    if !target_rate_bps.is_finite() || target_rate_bps <= 0.0 {
        return Err(DesignError::NonPositiveTarget(target_rate_bps));
    }
    let ppm = PpmConfig::uncoded(order, slot_time_s).expect("validated slot time");
    let saturation = saturation_rate_bps(&ppm);
    if target_rate_bps >= saturation {
        return Err(DesignError::TargetAtSaturation {
            target_bps: target_rate_bps,
            saturation_bps: saturation,
        });
    }

    let c = |pr: f64| {
        capacity_at(PowerW::new(pr).expect("bracketed power"), pn, photon_energy, order, slot_time_s)
    };
    let (mut lo, mut hi) = POWER_BRACKET_W;
    if c(lo) > target_rate_bps || c(hi) < target_rate_bps {
        return Err(DesignError::BracketDoesNotEnclose { lo, hi });
    }
    // Bisect in log space; the bracket spans 17 decades.
    while hi / lo - 1.0 > POWER_TOLERANCE {
        let mid = (lo * hi).sqrt();
        if c(mid) < target_rate_bps {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(PowerW::new((lo * hi).sqrt()).expect("positive power"))
}

/// Exhaustively enumerate `(M, T_slot, R_ecc)` combinations at a fixed
/// operating point and return the feasible combination with the highest
/// data rate. Feasible means `rate · margin <= capacity · coding_discount`.
/// Ties go to the smaller order, then the larger slot time. Returns
/// `Ok(None)` when no combination is feasible; that is an empty solution,
/// not an error.
pub fn ccsds_search(
    pr: PowerW,
    pn: PowerW,
    photon_energy: PhotonEnergyJ,
    constraints: &DesignConstraints,
) -> Result<Option<DesignSolution>, DesignError> {
    if constraints.order_set.is_empty() {
        return Err(DesignError::EmptyOrderSet);
    }
    // margin >= 1 loads the rate; discount <= 1 shrinks the capacity.
    let margin = 1.0 / constraints.link_margin.linear_factor();
    let discount = constraints.coding_efficiency.linear_factor();

    let mut best: Option<DesignSolution> = None;
    for &order in &constraints.order_set {
        for &slot_s in &constraints.slot_set_s {
            let capacity = capacity_at(pr, pn, photon_energy, order, slot_s);
            let budget = capacity * discount / margin;
            let peak = order.bits_per_symbol() / (f64::from(order.get()) * slot_s);

            let candidate_rates: Vec<f64> = match &constraints.rate_set {
                RateSet::Discrete(rates) => rates.clone(),
                // The best continuous rate saturates the budget, or the
                // uncoded peak if that binds first.
                RateSet::Continuous => vec![(budget / peak).min(1.0)],
            };

            for code_rate in candidate_rates {
                if !code_rate.is_finite() || code_rate <= 0.0 || code_rate > 1.0 {
                    continue;
                }
                let rate = code_rate * peak;
                if rate > budget * (1.0 + 1e-12) {
                    continue;
                }
                let candidate = DesignSolution {
                    order,
                    slot_time_s: slot_s,
                    code_rate,
                    achieved_rate_bps: rate,
                    capacity_bps: capacity,
                    required_power: None,
                    feasible: true,
                };
                if better(&candidate, best.as_ref()) {
                    best = Some(candidate);
                }
            }
        }
    }

    if let Some(solution) = best.as_mut() {
        solution.required_power = required_power(
            solution.achieved_rate_bps,
            solution.order,
            solution.slot_time_s,
            pn,
            photon_energy,
        )
        .ok();
    }
    Ok(best)
}

/// Total order on candidates: higher rate first, then smaller order, then
/// larger slot time. Any evaluation order reduces to the same winner.
fn better(candidate: &DesignSolution, best: Option<&DesignSolution>) -> bool {
    match best {
        None => true,
        Some(b) => {
            let candidate_key =
                (candidate.achieved_rate_bps, std::cmp::Reverse(candidate.order.get()), candidate.slot_time_s);
            let best_key = (b.achieved_rate_bps, std::cmp::Reverse(b.order.get()), b.slot_time_s);
            candidate_key.partial_cmp(&best_key) == Some(std::cmp::Ordering::Greater)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantities::{photon_energy, LengthM};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn rel_err(got: f64, want: f64) -> f64 {
        ((got - want) / want).abs()
    }

    fn e1550() -> PhotonEnergyJ {
        photon_energy(LengthM::new(1550e-9).unwrap()).unwrap()
    }

    fn w(x: f64) -> PowerW {
        PowerW::new(x).unwrap()
    }

    fn orders(ms: &[u32]) -> Vec<PpmOrder> {
        ms.iter().map(|&m| PpmOrder::new(m).unwrap()).collect()
    }

    fn table_orders() -> Vec<PpmOrder> {
        orders(&[16, 64, 256, 1024])
    }

    #[test]
    fn bright_link_prefers_smallest_order() {
        let m = optimal_order(w(1e-6), w(1e-14), 0.25e-9, e1550(), &orders(&[4, 16, 64, 256, 1024]))
            .unwrap();
        assert_eq!(m.get(), 4);
    }

    #[test]
    fn faint_link_prefers_largest_order() {
        let m = optimal_order(w(1e-15), w(1e-14), 0.25e-9, e1550(), &orders(&[4, 16, 64, 256, 1024]))
            .unwrap();
        assert_eq!(m.get(), 1024);
    }

    #[test]
    fn order_staircase_non_increasing_in_power() {
        let set = orders(&[4, 16, 64, 256, 1024]);
        let mut last = u32::MAX;
        for i in 0..=64 {
            let pr = 10f64.powf(-16.0 + 0.25 * f64::from(i));
            let m = optimal_order(w(pr), w(1e-14), 0.25e-9, e1550(), &set).unwrap().get();
            assert!(m <= last, "M* rose from {last} to {m} at Pr = {pr}");
            last = m;
        }
    }

    #[test]
    fn optimal_order_matches_brute_force_at_random_points() {
        let set = orders(&[2, 4, 8, 16, 32, 64, 128, 256, 512, 1024]);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..1000 {
            let pr = 10f64.powf(rng.gen_range(-17.0..-6.0));
            let pn = 10f64.powf(rng.gen_range(-18.0..-12.0));
            let fast = optimal_order(w(pr), w(pn), 0.25e-9, e1550(), &set).unwrap();
            // Brute force with reversed iteration order and explicit argmax.
            let brute = set
                .iter()
                .rev()
                .map(|&m| (m, capacity_at(w(pr), w(pn), e1550(), m, 0.25e-9)))
                .fold(None::<(PpmOrder, f64)>, |acc, (m, c)| match acc {
                    Some((mb, cb)) if cb > c || (cb == c && mb.get() < m.get()) => Some((mb, cb)),
                    _ => Some((m, c)),
                })
                .unwrap()
                .0;
            assert_eq!(fast, brute, "Pr={pr}, Pn={pn}");
        }
    }

    #[test]
    fn ecc_rate_for_published_worked_example() {
        let r = ecc_rate_for_target(56e6, PpmOrder::new(64).unwrap(), 1e-9).unwrap();
        assert!((r - 0.597).abs() < 0.01, "got {r}");
    }

    #[test]
    fn ecc_rate_peak_and_infeasible() {
        let m = PpmOrder::new(64).unwrap();
        let peak = 93.75e6;
        assert!(rel_err(ecc_rate_for_target(peak, m, 1e-9).unwrap(), 1.0) < 1e-12);
        assert!(matches!(
            ecc_rate_for_target(2.0 * peak, m, 1e-9),
            Err(DesignError::TargetExceedsPeak { .. })
        ));
    }

    #[test]
    fn required_power_inverts_published_mars_row() {
        let pr = required_power(123.42e6, PpmOrder::new(16).unwrap(), 0.25e-9, w(1.1620e-16), e1550())
            .unwrap();
        assert!(rel_err(pr.watts(), 4.5053e-12) < 5e-3, "got {}", pr.watts());
    }

    #[test]
    fn required_power_small_target_small_power() {
        let pr = required_power(1.0, PpmOrder::new(16).unwrap(), 0.25e-9, w(1e-16), e1550()).unwrap();
        assert!(pr.watts() < 1e-12);
    }

    #[test]
    fn required_power_rejects_saturated_target() {
        assert!(matches!(
            required_power(1e9, PpmOrder::new(16).unwrap(), 0.25e-9, w(1e-16), e1550()),
            Err(DesignError::TargetAtSaturation { .. })
        ));
    }

    #[test]
    fn required_power_matches_grid_scan_bracket() {
        // A 10^6-point logarithmic grid scan brackets the same root the
        // bisection returns.
        let target = 56e6;
        let order = PpmOrder::new(64).unwrap();
        let pn = w(2.1e-14);
        let solved = required_power(target, order, 1e-9, pn, e1550()).unwrap().watts();

        let n = 1_000_000usize;
        let (lo, hi) = POWER_BRACKET_W;
        let step = (hi / lo).powf(1.0 / n as f64);
        let mut bracket = None;
        let mut pr = lo;
        let mut last_below = lo;
        for _ in 0..=n {
            let c = capacity_at(w(pr), pn, e1550(), order, 1e-9);
            if c < target {
                last_below = pr;
            } else {
                bracket = Some((last_below, pr));
                break;
            }
            pr *= step;
        }
        let (blo, bhi) = bracket.expect("grid scan crosses the target");
        assert!(solved >= blo && solved <= bhi, "{solved} outside [{blo}, {bhi}]");
    }

    #[test]
    fn capacity_round_trip_through_required_power() {
        for &target in &[1e6, 20e6, 56e6, 90e6] {
            let order = PpmOrder::new(64).unwrap();
            let pr = required_power(target, order, 1e-9, w(1e-15), e1550()).unwrap();
            let c = capacity_at(pr, w(1e-15), e1550(), order, 1e-9);
            assert!(rel_err(c, target) < 5e-4, "target {target}: got {c}");
        }
    }

    fn worked_example_constraints(rate_set: RateSet) -> DesignConstraints {
        DesignConstraints {
            target_rate_bps: 56e6,
            order_set: table_orders(),
            slot_set_s: vec![1e-9],
            rate_set,
            coding_efficiency: DecibelLoss::new(0.0).unwrap(),
            link_margin: DecibelLoss::new(0.0).unwrap(),
        }
    }

    #[test]
    fn search_selects_worked_example_order() {
        // At the published operating power of 10^-12.5 W with Pn = 2.1e-14,
        // M = 64 carries the highest capacity of the allowed orders, so the
        // search and the direct argmax agree on it.
        let pr = w(10f64.powf(-12.5));
        let pn = w(2.1e-14);
        let sol = ccsds_search(pr, pn, e1550(), &worked_example_constraints(RateSet::Continuous))
            .unwrap()
            .expect("feasible");
        assert_eq!(sol.order.get(), 64);
        assert!(sol.feasible);
        let direct = optimal_order(pr, pn, 1e-9, e1550(), &table_orders()).unwrap();
        assert_eq!(direct.get(), 64);
    }

    #[test]
    fn search_single_combination_verdict() {
        let constraints = DesignConstraints {
            order_set: orders(&[16]),
            slot_set_s: vec![1e-9],
            rate_set: RateSet::Discrete(vec![0.5]),
            ..worked_example_constraints(RateSet::Continuous)
        };
        // 0.5 * 250 Mbps = 125 Mbps needs 125 Mbps of discounted capacity.
        let rich = ccsds_search(w(1e-9), w(1e-15), e1550(), &constraints).unwrap();
        assert!(rich.is_some());
        let poor = ccsds_search(w(1e-14), w(1e-15), e1550(), &constraints).unwrap();
        assert!(poor.is_none(), "infeasible set must yield the empty solution");
    }

    #[test]
    fn search_rate_never_exceeds_discounted_capacity() {
        let constraints = DesignConstraints {
            rate_set: RateSet::Discrete(vec![0.1, 0.25, 0.5, 0.6, 0.75, 1.0]),
            coding_efficiency: DecibelLoss::from_linear_factor(0.8).unwrap(),
            link_margin: DecibelLoss::new(4.0).unwrap(),
            ..worked_example_constraints(RateSet::Continuous)
        };
        let pr = w(3e-12);
        let pn = w(2.1e-14);
        let sol = ccsds_search(pr, pn, e1550(), &constraints).unwrap().expect("feasible");
        let discounted = sol.capacity_bps * 0.8 / 10f64.powf(0.4);
        assert!(sol.achieved_rate_bps <= discounted * (1.0 + 1e-12));
    }

    #[test]
    fn search_winner_removal_only_lowers_rate() {
        let constraints = DesignConstraints {
            rate_set: RateSet::Discrete(vec![0.25, 0.5, 0.75, 1.0]),
            ..worked_example_constraints(RateSet::Continuous)
        };
        let pr = w(3e-12);
        let pn = w(2.1e-14);
        let sol = ccsds_search(pr, pn, e1550(), &constraints).unwrap().expect("feasible");
        let mut reduced = constraints.clone();
        reduced.order_set.retain(|&m| m != sol.order);
        if let Some(second) = ccsds_search(pr, pn, e1550(), &reduced).unwrap() {
            assert!(second.achieved_rate_bps <= sol.achieved_rate_bps);
        }
    }

    #[test]
    fn search_is_iteration_order_independent() {
        let mut constraints = DesignConstraints {
            order_set: orders(&[1024, 16, 256, 64]),
            slot_set_s: vec![0.25e-9, 2e-9, 1e-9],
            rate_set: RateSet::Discrete(vec![1.0, 0.25, 0.5, 0.75]),
            ..worked_example_constraints(RateSet::Continuous)
        };
        let pr = w(4e-13);
        let pn = w(2.1e-14);
        let forward = ccsds_search(pr, pn, e1550(), &constraints).unwrap();
        constraints.order_set.reverse();
        constraints.slot_set_s.reverse();
        if let RateSet::Discrete(rates) = &mut constraints.rate_set {
            rates.reverse();
        }
        let backward = ccsds_search(pr, pn, e1550(), &constraints).unwrap();
        assert_eq!(forward, backward);
    }

    #[test]
    fn empty_order_set_is_an_error() {
        let constraints =
            DesignConstraints { order_set: vec![], ..worked_example_constraints(RateSet::Continuous) };
        assert!(matches!(
            ccsds_search(w(1e-12), w(1e-14), e1550(), &constraints),
            Err(DesignError::EmptyOrderSet)
        ));
        assert!(matches!(
            optimal_order(w(1e-12), w(1e-14), 1e-9, e1550(), &[]),
            Err(DesignError::EmptyOrderSet)
        ));
    }
}
