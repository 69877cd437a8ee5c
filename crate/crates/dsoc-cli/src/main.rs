//! Command-line surface for the link-engineering library.
//!
//! Every run echoes the fully resolved parameter set to stderr before any
//! result, and writes results as CSV (header row mandatory, scientific
//! notation, ten significant digits) to stdout or `--out`.
//!
//! Exit codes: 0 success, 1 infeasible design, 2 invalid input.

mod output;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use output::{echo, echo_block, sci, Csv};
use std::path::PathBuf;
use std::process::ExitCode;

use dsoc::capacity::{holevo_limit_bps, ppm_pc_capacity, OperatingPoint, PowerTap};
use dsoc::designer::{ccsds_search, ecc_rate_for_target, optimal_order, required_power, DesignConstraints, RateSet};
use dsoc::detector::{blocking_loss, detected_power, jitter_loss, jitter_psi, FluxPair};
use dsoc::link_budget::received_power;
use dsoc::montecarlo::{simulate_blocking, simulate_ser, SimConfig};
use dsoc::oam::{beam_radius_m, polar_raster, ring_radius_m, sample_profile, LgBeamSpec};
use dsoc::ppm::{bit_error_probability, symbol_error_probability, PoissonSlotModel, PpmConfig, PpmOrder};
use dsoc::quantities::{DecibelLoss, PowerW, ASTRONOMICAL_UNIT_M};
use dsoc::scenario::{
    capacity_vs_distance_sweep, figure_of_merit, log_grid, parse_config, planet_catalog,
    planets_table, DistanceKind, MissionPreset,
};

#[derive(Parser)]
#[command(name = "dsoc", version, about = "Deep-space optical link engineering")]
struct Cli {
    /// Flat `key = value` config file overlaid on the built-in preset
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// CSV destination; `-` or omitted writes to stdout
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// RNG seed for stochastic commands
    #[arg(long, global = true, default_value_t = 1)]
    seed: u64,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum TapArg {
    Pre,
    Detected,
}

impl TapArg {
    fn tap(self) -> PowerTap {
        match self {
            TapArg::Pre => PowerTap::PreDetector,
            TapArg::Detected => PowerTap::Detected,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum DistanceArg {
    Min,
    Avg,
    Max,
}

impl DistanceArg {
    fn kind(self) -> DistanceKind {
        match self {
            DistanceArg::Min => DistanceKind::Min,
            DistanceArg::Avg => DistanceKind::Avg,
            DistanceArg::Max => DistanceKind::Max,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Received-power budget with the per-factor dB breakdown
    Budget {
        /// Link range in meters (overrides the preset range)
        #[arg(long)]
        range_m: Option<f64>,
        /// Use a catalog body's distance instead of an explicit range
        #[arg(long)]
        planet: Option<String>,
        /// Which stored distance of the body to use
        #[arg(long, value_enum, default_value_t = DistanceArg::Avg)]
        distance: DistanceArg,
    },
    /// Soft capacity of the PPM photon-counting channel at one point
    Capacity {
        /// Received power in watts; computed from the link chain if omitted
        #[arg(long)]
        pr_w: Option<f64>,
        /// Noise power in watts; computed from the noise chain if omitted
        #[arg(long)]
        pn_w: Option<f64>,
        /// Which power feeds the formula when derived from the chain
        #[arg(long, value_enum, default_value_t = TapArg::Pre)]
        tap: TapArg,
    },
    /// Analytic PPM error probabilities over an (order, Ks) grid
    Ser {
        #[arg(long, value_delimiter = ',', default_value = "2,4,16,64,256")]
        orders: Vec<u32>,
        #[arg(long, value_delimiter = ',', default_value = "0.5,1,2,5,10")]
        ks: Vec<f64>,
    },
    /// Select (M, T_slot, R_ecc) by exhaustive search at an operating point
    Design {
        /// Target data rate in bits per second
        #[arg(long)]
        target_bps: f64,
        /// Received power in watts; computed from the link chain if omitted
        #[arg(long)]
        pr_w: Option<f64>,
        /// Noise power in watts; computed from the noise chain if omitted
        #[arg(long)]
        pn_w: Option<f64>,
        #[arg(long, value_delimiter = ',', default_value = "16,64,256,1024")]
        orders: Vec<u32>,
        /// Candidate slot times in nanoseconds (defaults to the preset slot)
        #[arg(long, value_delimiter = ',')]
        slots_ns: Option<Vec<f64>>,
        /// Candidate code rates, or `continuous`
        #[arg(long, default_value = "continuous")]
        rates: String,
    },
    /// Capacity versus distance over a (distance, diameter, order, slot) grid
    Sweep {
        #[arg(long, default_value_t = 5e11)]
        start_m: f64,
        #[arg(long, default_value_t = 1e13)]
        stop_m: f64,
        #[arg(long, default_value_t = 40)]
        points: usize,
        #[arg(long, value_delimiter = ',', default_value = "4")]
        diameters_m: Vec<f64>,
        #[arg(long, value_delimiter = ',', default_value = "16,64,256,1024")]
        orders: Vec<u32>,
        /// Slot times in nanoseconds (defaults to the preset slot)
        #[arg(long, value_delimiter = ',')]
        slots_ns: Option<Vec<f64>>,
        #[arg(long, value_enum, default_value_t = TapArg::Pre)]
        tap: TapArg,
    },
    /// Capacity table over the planet catalog's reference received powers
    Planets {
        /// Noise power in watts fed to every row
        #[arg(long, default_value_t = 1.1620e-16)]
        pn_w: f64,
    },
    /// Laguerre-Gaussian beam profile or polar raster export
    Oam {
        /// Azimuthal index l (sign = twist direction)
        #[arg(long, default_value_t = 1)]
        l: i32,
        /// Radial index p
        #[arg(long, default_value_t = 0)]
        p: u32,
        #[arg(long, default_value_t = 0.5)]
        waist_m: f64,
        #[arg(long, default_value_t = 4.01e11)]
        distance_m: f64,
        #[arg(long, default_value_t = 512)]
        samples: usize,
        #[arg(long, default_value_t = 4.0)]
        r_max_waists: f64,
        /// Emit an (r, phi) raster instead of the radial profile
        #[arg(long)]
        raster: bool,
        /// Azimuthal sample count for raster output
        #[arg(long, default_value_t = 64)]
        phi_samples: usize,
    },
    /// Figure of merit 10·Dis²·R/(Dia·P)
    Fom {
        #[arg(long)]
        distance_au: Option<f64>,
        /// Distance in meters, converted to AU
        #[arg(long)]
        distance_m: Option<f64>,
        #[arg(long)]
        rate_bps: f64,
        #[arg(long)]
        aperture_m: f64,
        #[arg(long)]
        power_w: f64,
    },
    /// Monte Carlo oracles
    #[command(subcommand)]
    Simulate(SimulateCommand),
}

#[derive(Subcommand)]
enum SimulateCommand {
    /// ML symbol-error simulation over Poisson slot counts
    Ser {
        #[arg(long, value_delimiter = ',', default_value = "16")]
        orders: Vec<u32>,
        #[arg(long, value_delimiter = ',', default_value = "1")]
        ks: Vec<f64>,
        #[arg(long, default_value_t = 0.0)]
        kb: f64,
        #[arg(long, default_value_t = 1_000_000)]
        trials: u64,
    },
    /// Non-paralyzable dead-time throughput simulation
    Blocking {
        #[arg(long)]
        flux_per_s: f64,
        #[arg(long)]
        dead_time_ns: f64,
        #[arg(long, default_value_t = 1.0)]
        horizon_s: f64,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}

fn load_preset(cli: &Cli) -> Result<MissionPreset> {
    match &cli.config {
        None => Ok(MissionPreset::default()),
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .with_context(|| format!("reading config {}", path.display()))?;
            parse_config(&text).map_err(|e| anyhow!("{e}"))
        }
    }
}

fn parse_orders(raw: &[u32]) -> Result<Vec<PpmOrder>> {
    raw.iter().map(|&m| PpmOrder::new(m).map_err(|e| anyhow!("{e}"))).collect()
}

/// Pre-detector received power and total noise power from the preset chain.
fn chain_powers(preset: &MissionPreset) -> Result<(PowerW, PowerW)> {
    let scenario = preset.link_scenario().map_err(|e| anyhow!("{e}"))?;
    let pr_ap = received_power(&scenario).map_err(|e| anyhow!("{e}"))?.received_power;
    let pn = preset.noise_power_at(preset.receiver_diameter_m, pr_ap).map_err(|e| anyhow!("{e}"))?;
    Ok((pr_ap, pn))
}

fn run(cli: &Cli) -> Result<ExitCode> {
    let preset = load_preset(cli)?;
    echo_block(&preset.render());

    match &cli.command {
        Command::Budget { range_m, planet, distance } => {
            let mut preset = preset;
            if let Some(name) = planet {
                let catalog = planet_catalog();
                let body = catalog
                    .iter()
                    .find(|p| p.name.eq_ignore_ascii_case(name))
                    .ok_or_else(|| anyhow!("unknown planet `{name}`"))?;
                preset.range_m = body.distance(distance.kind()).meters();
                echo("range_source", format!("planet {} ({})", body.name, distance.kind().label()));
            } else if let Some(r) = range_m {
                preset.range_m = *r;
                echo("range_source", "explicit range_m");
            } else {
                echo("range_source", "preset range_m");
            }
            echo("resolved_range_m", preset.range_m);

            let scenario = preset.link_scenario().map_err(|e| anyhow!("{e}"))?;
            let report = received_power(&scenario).map_err(|e| anyhow!("{e}"))?;
            echo("link_margin_db_informational", report.link_margin.db());

            let mut csv = Csv::new(&["quantity", "linear", "db"]);
            csv.row(&["tx_power_w".into(), sci(report.tx_power.watts()), sci(report.tx_power.dbw())]);
            for factor in &report.factors {
                csv.row(&[factor.name.into(), sci(factor.linear), sci(factor.db)]);
            }
            csv.row(&[
                "received_power_w".into(),
                sci(report.received_power.watts()),
                sci(report.received_power.dbw()),
            ]);
            csv.write(&cli.out)?;
            Ok(ExitCode::SUCCESS)
        }

        Command::Capacity { pr_w, pn_w, tap } => {
            let (chain_pr, chain_pn) = chain_powers(&preset)?;
            let pn = match pn_w {
                Some(v) => PowerW::new(*v).map_err(|e| anyhow!("{e}"))?,
                None => chain_pn,
            };
            let pr = match (pr_w, tap) {
                (Some(v), _) => PowerW::new(*v).map_err(|e| anyhow!("{e}"))?,
                (None, TapArg::Pre) => chain_pr,
                (None, TapArg::Detected) => {
                    let det = preset.detector().map_err(|e| anyhow!("{e}"))?;
                    let e = preset.photon_energy().map_err(|e| anyhow!("{e}"))?;
                    let flux = FluxPair::from_powers(chain_pr, pn, det.quantum_efficiency, e)
                        .map_err(|e| anyhow!("{e}"))?;
                    let mu = blocking_loss(&flux, det.dead_time_s);
                    let ppm = preset.ppm().map_err(|e| anyhow!("{e}"))?;
                    let psi =
                        jitter_psi(det.jitter_sigma_s, ppm.slot_time_s(), ppm.code_rate(), ppm.order());
                    let lj = jitter_loss(psi, &det.jitter_polynomial);
                    echo("blocking_factor", mu);
                    echo("jitter_loss_db", lj.db());
                    detected_power(chain_pr, &det, mu, lj)
                }
            };
            echo("capacity_power_tap", tap.tap().label());

            let ppm = preset.ppm().map_err(|e| anyhow!("{e}"))?;
            let op = OperatingPoint {
                received_power: pr,
                noise_power: pn,
                photon_energy: preset.photon_energy().map_err(|e| anyhow!("{e}"))?,
                ppm,
                power_tap: tap.tap(),
            };
            let report = ppm_pc_capacity(&op);

            let mut csv = Csv::new(&[
                "pr_w",
                "pn_w",
                "order",
                "slot_time_s",
                "capacity_bps",
                "regime",
                "term_noise_w",
                "term_quantum_w",
                "term_bandwidth_w",
                "holevo_limit_bps",
                "power_tap",
            ]);
            csv.row(&[
                sci(pr.watts()),
                sci(pn.watts()),
                ppm.order().get().to_string(),
                sci(ppm.slot_time_s()),
                sci(report.capacity_bps),
                report.regime.label().into(),
                sci(report.term_noise_w),
                sci(report.term_quantum_w),
                sci(report.term_bandwidth_w),
                sci(holevo_limit_bps(report.capacity_bps)),
                report.power_tap.label().into(),
            ]);
            csv.write(&cli.out)?;
            Ok(ExitCode::SUCCESS)
        }

        Command::Ser { orders, ks } => {
            let orders = parse_orders(orders)?;
            let mut csv = Csv::new(&["order", "ks_photons", "symbol_error_prob", "bit_error_prob"]);
            for &order in &orders {
                for &k in ks {
                    if k < 0.0 {
                        bail!("ks must be non-negative, got {k}");
                    }
                    csv.row(&[
                        order.get().to_string(),
                        sci(k),
                        sci(symbol_error_probability(order, k)),
                        sci(bit_error_probability(order, k)),
                    ]);
                }
            }
            csv.write(&cli.out)?;
            Ok(ExitCode::SUCCESS)
        }

        Command::Design { target_bps, pr_w, pn_w, orders, slots_ns, rates } => {
            let (chain_pr, chain_pn) = chain_powers(&preset)?;
            let pr = match pr_w {
                Some(v) => PowerW::new(*v).map_err(|e| anyhow!("{e}"))?,
                None => chain_pr,
            };
            let pn = match pn_w {
                Some(v) => PowerW::new(*v).map_err(|e| anyhow!("{e}"))?,
                None => chain_pn,
            };
            let e = preset.photon_energy().map_err(|e| anyhow!("{e}"))?;
            let order_set = parse_orders(orders)?;
            let slot_set: Vec<f64> = slots_ns
                .clone()
                .unwrap_or_else(|| vec![preset.slot_time_ns])
                .iter()
                .map(|ns| ns * 1e-9)
                .collect();
            let rate_set = if rates == "continuous" {
                RateSet::Continuous
            } else {
                let parsed: Result<Vec<f64>, _> =
                    rates.split(',').map(|r| r.trim().parse::<f64>()).collect();
                RateSet::Discrete(parsed.context("parsing --rates")?)
            };
            let constraints = DesignConstraints {
                target_rate_bps: *target_bps,
                order_set: order_set.clone(),
                slot_set_s: slot_set.clone(),
                rate_set,
                coding_efficiency: DecibelLoss::from_linear_factor(preset.coding_efficiency)
                    .map_err(|e| anyhow!("{e}"))?,
                link_margin: DecibelLoss::new(preset.link_margin_db).map_err(|e| anyhow!("{e}"))?,
            };

            echo("design_pr_w", sci(pr.watts()));
            echo("design_pn_w", sci(pn.watts()));
            let m_star = optimal_order(pr, pn, slot_set[0], e, &order_set).map_err(|e| anyhow!("{e}"))?;
            echo("capacity_optimal_order", m_star.get());

            let solution = ccsds_search(pr, pn, e, &constraints).map_err(|e| anyhow!("{e}"))?;
            let mut csv = Csv::new(&[
                "order",
                "slot_time_s",
                "code_rate",
                "achieved_rate_bps",
                "capacity_bps",
                "required_power_w",
                "feasible",
                "meets_target",
            ]);
            match solution {
                None => {
                    echo("design_outcome", "no feasible combination");
                    csv.write(&cli.out)?;
                    Ok(ExitCode::from(1))
                }
                Some(sol) => {
                    let meets = sol.achieved_rate_bps + 1e-9 >= *target_bps;
                    if let Ok(r_target) = ecc_rate_for_target(*target_bps, sol.order, sol.slot_time_s) {
                        echo("code_rate_for_target_at_selected_order", sci(r_target));
                    }
                    if let Ok(p_target) = required_power(*target_bps, sol.order, sol.slot_time_s, pn, e) {
                        echo("required_power_for_target_w", sci(p_target.watts()));
                    }
                    csv.row(&[
                        sol.order.get().to_string(),
                        sci(sol.slot_time_s),
                        sci(sol.code_rate),
                        sci(sol.achieved_rate_bps),
                        sci(sol.capacity_bps),
                        sol.required_power.map(|p| sci(p.watts())).unwrap_or_default(),
                        sol.feasible.to_string(),
                        meets.to_string(),
                    ]);
                    csv.write(&cli.out)?;
                    if meets {
                        Ok(ExitCode::SUCCESS)
                    } else {
                        echo("design_outcome", "best feasible rate falls short of the target");
                        Ok(ExitCode::from(1))
                    }
                }
            }
        }

        Command::Sweep { start_m, stop_m, points, diameters_m, orders, slots_ns, tap } => {
            let order_set = parse_orders(orders)?;
            let slots: Vec<f64> = slots_ns
                .clone()
                .unwrap_or_else(|| vec![preset.slot_time_ns])
                .iter()
                .map(|ns| ns * 1e-9)
                .collect();
            if !start_m.is_finite() || *start_m <= 0.0 || stop_m <= start_m || *points < 2 {
                bail!("sweep grid requires 0 < start_m < stop_m and points >= 2");
            }
            let distances = log_grid(*start_m, *stop_m, *points);
            echo("sweep_grid", format!("{} log-spaced points in [{start_m}, {stop_m}] m", points));
            echo("capacity_power_tap", tap.tap().label());

            let rows =
                capacity_vs_distance_sweep(&preset, &distances, diameters_m, &order_set, &slots, tap.tap())
                    .map_err(|e| anyhow!("{e}"))?;
            let mut csv = Csv::new(&[
                "distance_m",
                "receiver_diameter_m",
                "order",
                "slot_time_s",
                "pr_w",
                "pn_w",
                "capacity_bps",
                "regime",
            ]);
            for row in rows {
                csv.row(&[
                    sci(row.distance_m),
                    sci(row.receiver_diameter_m),
                    row.order.get().to_string(),
                    sci(row.slot_time_s),
                    sci(row.pr_w),
                    sci(row.pn_w),
                    sci(row.capacity_bps),
                    row.regime.label().into(),
                ]);
            }
            csv.write(&cli.out)?;
            Ok(ExitCode::SUCCESS)
        }

        Command::Planets { pn_w } => {
            let ppm = preset.ppm().map_err(|e| anyhow!("{e}"))?;
            echo("planet_distance_used", "avg (delay column)");
            echo("planet_pr_source", "catalog reference received powers");
            let rows = planets_table(
                &planet_catalog(),
                PowerW::new(*pn_w).map_err(|e| anyhow!("{e}"))?,
                ppm.order(),
                ppm.slot_time_s(),
                preset.wavelength().map_err(|e| anyhow!("{e}"))?,
            )
            .map_err(|e| anyhow!("{e}"))?;
            let mut csv = Csv::new(&[
                "planet",
                "avg_distance_m",
                "received_power_w",
                "capacity_bps",
                "delay_minutes",
            ]);
            for row in rows {
                csv.row(&[
                    row.name.into(),
                    sci(row.distance_m),
                    sci(row.received_power_w),
                    sci(row.capacity_bps),
                    sci(row.delay_s / 60.0),
                ]);
            }
            csv.write(&cli.out)?;
            Ok(ExitCode::SUCCESS)
        }

        Command::Oam { l, p, waist_m, distance_m, samples, r_max_waists, raster, phi_samples } => {
            let spec = LgBeamSpec::new(*l, *p, *waist_m, preset.wavelength().map_err(|e| anyhow!("{e}"))?)
                .map_err(|e| anyhow!("{e}"))?;
            echo("rayleigh_range_m", spec.rayleigh_range_m());
            echo("beam_radius_at_distance_m", beam_radius_m(&spec, *distance_m));
            if *p == 0 {
                echo("ring_radius_m", ring_radius_m(&spec, *distance_m).map_err(|e| anyhow!("{e}"))?);
            }

            if *raster {
                let grid = polar_raster(&spec, *distance_m, *samples, *phi_samples, *r_max_waists)
                    .map_err(|e| anyhow!("{e}"))?;
                let peak = grid.iter().map(|s| s.intensity).fold(f64::MIN, f64::max);
                let mut csv =
                    Csv::new(&["r_meters", "phi_rad", "intensity_normalized", "phase_rad"]);
                for sample in grid {
                    let normalized = if peak > 0.0 { sample.intensity / peak } else { 0.0 };
                    csv.row(&[
                        sci(sample.r_m),
                        sci(sample.phi_rad),
                        sci(normalized),
                        sci(sample.phase_rad),
                    ]);
                }
                csv.write(&cli.out)?;
            } else {
                let profile = sample_profile(&spec, *distance_m, *samples, *r_max_waists)
                    .map_err(|e| anyhow!("{e}"))?;
                let mut csv = Csv::new(&["r_meters", "intensity_normalized"]);
                for (r, intensity) in profile.normalized_samples() {
                    csv.row(&[sci(r), sci(intensity)]);
                }
                csv.write(&cli.out)?;
            }
            Ok(ExitCode::SUCCESS)
        }

        Command::Fom { distance_au, distance_m, rate_bps, aperture_m, power_w } => {
            let dis_au = match (distance_au, distance_m) {
                (Some(au), None) => *au,
                (None, Some(m)) => m / ASTRONOMICAL_UNIT_M,
                _ => bail!("provide exactly one of --distance-au or --distance-m"),
            };
            let fom = figure_of_merit(dis_au, *rate_bps, *aperture_m, *power_w)
                .map_err(|e| anyhow!("{e}"))?;
            let mut csv = Csv::new(&["distance_au", "rate_bps", "aperture_m", "power_w", "fom"]);
            csv.row(&[sci(dis_au), sci(*rate_bps), sci(*aperture_m), sci(*power_w), sci(fom)]);
            csv.write(&cli.out)?;
            Ok(ExitCode::SUCCESS)
        }

        Command::Simulate(SimulateCommand::Ser { orders, ks, kb, trials }) => {
            let orders = parse_orders(orders)?;
            let mut csv = Csv::new(&[
                "order",
                "ks_photons",
                "kb_photons",
                "trials",
                "seed",
                "estimate",
                "stderr",
                "errors",
            ]);
            let mut row_index = 0u64;
            for &order in &orders {
                for &k in ks {
                    let seed = cli.seed + row_index;
                    row_index += 1;
                    let cfg = SimConfig {
                        trials: *trials,
                        seed,
                        ppm: PpmConfig::uncoded(order, 1e-9).map_err(|e| anyhow!("{e}"))?,
                        slot_model: PoissonSlotModel::new(k, *kb).map_err(|e| anyhow!("{e}"))?,
                    };
                    let est = simulate_ser(&cfg).map_err(|e| anyhow!("{e}"))?;
                    csv.row(&[
                        order.get().to_string(),
                        sci(k),
                        sci(*kb),
                        est.trials.to_string(),
                        seed.to_string(),
                        sci(est.estimate),
                        sci(est.stderr),
                        est.errors.to_string(),
                    ]);
                }
            }
            csv.write(&cli.out)?;
            Ok(ExitCode::SUCCESS)
        }

        Command::Simulate(SimulateCommand::Blocking { flux_per_s, dead_time_ns, horizon_s }) => {
            let est = simulate_blocking(*flux_per_s, dead_time_ns * 1e-9, *horizon_s, cli.seed)
                .map_err(|e| anyhow!("{e}"))?;
            let mut csv = Csv::new(&[
                "flux_per_s",
                "dead_time_s",
                "horizon_s",
                "seed",
                "throughput_ratio",
                "arrived",
                "counted",
            ]);
            csv.row(&[
                sci(*flux_per_s),
                sci(dead_time_ns * 1e-9),
                sci(*horizon_s),
                cli.seed.to_string(),
                sci(est.throughput_ratio),
                est.arrived.to_string(),
                est.counted.to_string(),
            ]);
            csv.write(&cli.out)?;
            Ok(ExitCode::SUCCESS)
        }
    }
}
