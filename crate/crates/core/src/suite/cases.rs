//! Per-check trial cases: which functions and which exponents each
//! registered check runs over by default, and how command-line
//! overrides narrow them.
//!
//! Every check carries an exponent domain; overridden exponents outside
//! the domain are dropped (an empty case list surfaces as a skipped
//! outcome, not an error).

use crate::error::Result;
use crate::funclib::{GeodesicAtom, ScalarFn};

use super::SuiteConfig;

/// One (function, exponent) cell of a check's trial grid.
#[derive(Debug, Clone)]
pub struct TrialCase {
    pub func: ScalarFn,
    pub p: f64,
}

fn pow(a: f64) -> ScalarFn {
    ScalarFn::power(a)
}

fn warith(w: f64) -> ScalarFn {
    ScalarFn::weighted_arith(w).expect("weight in [0,1]")
}

fn wharm(w: f64) -> ScalarFn {
    ScalarFn::weighted_harm(w).expect("weight in [0,1]")
}

fn halfsum(a: f64) -> ScalarFn {
    ScalarFn::half_sum(a)
}

fn logmean() -> ScalarFn {
    ScalarFn::log_mean()
}

/// A strict two-atom geodesic combination used as the non-trivial
/// interpolation example.
fn geo_mix() -> ScalarFn {
    ScalarFn::geodesic(vec![
        GeodesicAtom {
            alpha: 0.2,
            weight: 0.4,
        },
        GeodesicAtom {
            alpha: 0.8,
            weight: 0.6,
        },
    ])
    .expect("valid atoms")
}

/// `t·h(t)`.
fn th(h: ScalarFn) -> ScalarFn {
    ScalarFn::t_pow_times(1, h).expect("n >= 1")
}

fn tpow(n: u32, h: ScalarFn) -> ScalarFn {
    ScalarFn::t_pow_times(n, h).expect("n >= 1")
}

fn arg_recip(h: ScalarFn) -> ScalarFn {
    ScalarFn::arg_reciprocal(h).expect("catalog closure")
}

/// Normalized operator-monotone functions that raise powers
/// (`f(t^p) ≥ f(t)^p` for `p ≥ 1`).
fn pmi_means() -> Vec<ScalarFn> {
    vec![warith(0.5), logmean(), halfsum(0.3), geo_mix()]
}

/// Normalized operator-monotone functions that lower powers.
fn pmd_means() -> Vec<ScalarFn> {
    vec![wharm(0.5), wharm(0.3)]
}

/// Mean suite function list (power functions sit on the boundary: they
/// raise and lower powers with equality).
fn mean_funcs() -> Vec<ScalarFn> {
    vec![
        pow(0.5),
        warith(0.5),
        wharm(0.5),
        logmean(),
        halfsum(0.3),
    ]
}

fn cross(funcs: Vec<ScalarFn>, ps: &[f64]) -> Vec<TrialCase> {
    let mut out = Vec::with_capacity(funcs.len() * ps.len());
    for f in funcs {
        for &p in ps {
            out.push(TrialCase {
                func: f.clone(),
                p,
            });
        }
    }
    out
}

/// Exponent domain per check; used to filter command-line overrides.
fn p_admissible(id: &str, p: f64) -> bool {
    if !(p > 0.0) || !p.is_finite() {
        return false;
    }
    match id {
        "THM32-71" | "THM32-72" => (1.0..=2.0).contains(&p),
        "THM32-73" | "THM32-74" => p <= 1.0,
        "COR33-75" | "COR33-77" | "PROP34" => p >= 1.0,
        "COR33-76" | "COR33-78" | "PROP35" | "COR38" => p <= 1.0,
        "PROP39" => (0.5..=1.0).contains(&p),
        "PROP310" | "COR311" => (1.0..=2.0).contains(&p),
        "FMPS" => p > 1.0,
        "PROP313-21" | "PROP313-22" => (0.5..=1.0).contains(&p),
        "PROP313-23" | "PROP313-24" => (1.0..=2.0).contains(&p),
        "COR314" => (0.5..=2.0).contains(&p),
        "THM41" | "SING-PROP612" => p <= 0.5,
        "SING-PROP610" => p <= 1.0,
        "SING-PROP611" => (0.5..=2.0).contains(&p),
        "SING-PROP613" => (0.5..=1.0).contains(&p),
        _ => true,
    }
}

/// Default (function, exponent) grid of a check.
fn default_cases(id: &str) -> Vec<TrialCase> {
    let up = &[1.0, 1.3, 1.7, 2.0];
    let down = &[0.3, 0.6, 0.9, 1.0];
    match id {
        "AH-NORM" => {
            let mut v = cross(vec![pow(0.5)], &[1.0, 1.5, 2.0, 4.0]);
            v.extend(cross(
                vec![pow(-0.5), pow(2.0), th(warith(0.5))],
                &[0.25, 0.5, 1.0],
            ));
            v.extend(cross(vec![pow(3.0)], &[0.25, 0.5, 0.75]));
            v
        }
        "AH2-NORM" => {
            // Mirror regions; power functions are self-adjoint, and the
            // adjoint of t·h lands in the mirrored class.
            let mut v = cross(vec![pow(0.5)], &[1.0, 1.5, 2.0, 4.0]);
            v.extend(cross(
                vec![
                    pow(-0.5),
                    pow(2.0),
                    ScalarFn::adjoint(th(warith(0.5))),
                ],
                &[0.25, 0.5, 1.0],
            ));
            v.extend(cross(vec![pow(3.0)], &[0.25, 0.5, 0.75]));
            v
        }
        "THM32-71" | "THM32-72" => cross(mean_funcs(), up),
        "THM32-73" | "THM32-74" => cross(mean_funcs(), down),
        "COR33-75" => cross(
            {
                let mut f = pmi_means();
                f.push(pow(0.5));
                f
            },
            &[1.0, 2.0, 2.5, 3.0, 4.0, 8.0],
        ),
        "COR33-76" => cross(
            {
                let mut f = pmi_means();
                f.push(pow(0.5));
                f
            },
            &[0.2, 0.5, 0.8, 1.0],
        ),
        "COR33-77" => cross(
            {
                let mut f = pmd_means();
                f.push(pow(0.5));
                f
            },
            &[1.0, 2.0, 2.5, 3.0, 4.0, 8.0],
        ),
        "COR33-78" => cross(
            {
                let mut f = pmd_means();
                f.push(pow(0.5));
                f
            },
            &[0.2, 0.5, 0.8, 1.0],
        ),
        "PROP34" => cross(mean_funcs(), &[1.0, 1.5, 2.0, 3.0, 5.0]),
        "PROP35" => cross(
            vec![th(warith(0.5)), th(halfsum(0.3)), pow(1.5)],
            &[0.25, 0.5, 0.75, 1.0],
        ),
        "THM37-EQUIV" => cross(
            vec![warith(0.5), logmean(), halfsum(0.3)],
            &[0.25, 0.5, 1.0, 2.0, 4.0],
        ),
        "COR38" => cross(
            vec![
                arg_recip(warith(0.5)),
                arg_recip(halfsum(0.3)),
                th(warith(0.5)),
                th(logmean()),
            ],
            &[0.1, 0.25, 0.5, 0.75, 1.0],
        ),
        "PROP39" => cross(
            vec![
                pow(-0.5),
                arg_recip(warith(0.5)),
                th(warith(0.5)),
                pow(1.5),
            ],
            &[0.5, 0.6, 0.75, 0.9, 1.0],
        ),
        "PROP310" => cross(
            vec![
                pow(1.5),
                pow(2.0),
                th(warith(0.5)),
                pow(-0.5),
                arg_recip(warith(0.5)),
            ],
            &[1.0, 1.5, 2.0],
        ),
        "COR311" => cross(
            vec![th(wharm(0.5)), th(warith(0.5)), pow(1.5)],
            &[1.0, 1.5, 2.0],
        ),
        "FMPS" => cross(
            vec![pow(1.5), pow(2.0), pow(3.0)],
            &[1.2, 1.5, 2.0],
        ),
        "PROP313-21" | "PROP313-22" => cross(
            vec![
                pow(-0.5),
                arg_recip(warith(0.5)),
                th(warith(0.5)),
                pow(1.5),
            ],
            &[0.5, 0.6, 0.75, 0.9, 1.0],
        ),
        "PROP313-23" | "PROP313-24" => cross(
            vec![
                pow(-0.5),
                arg_recip(warith(0.5)),
                th(warith(0.5)),
                pow(1.5),
            ],
            &[1.0, 1.5, 2.0],
        ),
        "COR314" => cross(
            vec![
                arg_recip(warith(0.5)),
                arg_recip(wharm(0.5)),
                th(warith(0.5)),
                pow(-0.5),
            ],
            &[0.6, 0.75, 0.9, 1.0, 1.5, 2.0],
        ),
        "PROP315" => cross(
            vec![
                warith(0.5),
                halfsum(0.3),
                halfsum(0.1),
                pow(0.3),
                geo_mix(),
            ],
            &[0.3, 0.7, 1.5, 2.0, 3.0],
        ),
        "THM41" => cross(
            vec![
                tpow(2, warith(0.5)),
                tpow(3, warith(0.5)),
                tpow(2, logmean()),
                tpow(2, wharm(0.5)),
            ],
            &[0.1, 0.25, 0.5],
        ),
        "LEMMA42" => cross(
            vec![
                ScalarFn::numeric_inverse(2, warith(0.5)),
                ScalarFn::numeric_inverse(3, warith(0.5)),
                ScalarFn::numeric_inverse(2, pow(0.4)),
            ],
            &[1.0],
        ),
        "PROP46" => Vec::new(), // handled by the dedicated scan runner
        "PROP49" => cross(
            vec![th(warith(0.5)), th(halfsum(0.3)), logmean()],
            &[1.2, 1.5, 2.0],
        ),
        "LT-CONV" => cross(
            vec![pow(0.7), logmean(), th(pow(0.5))],
            &[1e-2],
        ),
        "COR53" => cross(
            vec![warith(0.3), warith(0.7), halfsum(0.3), logmean()],
            &[0.1, 0.5, 1.0, 2.0],
        ),
        "COR54" => cross(vec![warith(0.5), halfsum(0.3)], &[1.0]),
        "COR55" => cross(
            vec![pow(1.5), pow(2.0), pow(3.0)],
            &[0.3, 1.0, 2.0],
        ),
        "PROP56" => cross(
            vec![wharm(0.3), wharm(0.7), th(warith(0.5))],
            &[0.3, 1.0, 2.0],
        ),
        "COR58" => cross(
            vec![tpow(1, warith(0.5)), tpow(2, warith(0.5))],
            &[1.0],
        ),
        "PROP59" => cross(vec![wharm(0.3), wharm(0.5)], &[1.0]),
        "COR510" => cross(vec![warith(0.3), warith(0.7)], &[1.0]),
        "SING-THM62" => cross(
            vec![warith(0.5), pow(0.5), logmean(), pow(-0.5)],
            &[1.0],
        ),
        "SING-THM63" => cross(vec![warith(0.5), pow(0.5)], &[1.0]),
        "SING-PROP68" => cross(vec![pow(2.0), pow(-0.5)], &[1.0]),
        "SING-PROP610" => cross(
            vec![th(warith(0.5)), pow(1.5), th(halfsum(0.3))],
            &[0.25, 0.5, 0.75, 1.0],
        ),
        "SING-PROP611" => cross(
            vec![th(warith(0.5)), pow(1.5)],
            &[0.6, 0.75, 0.9, 1.0, 1.5, 2.0],
        ),
        "SING-PROP612" => cross(
            vec![tpow(2, warith(0.5)), tpow(3, warith(0.5))],
            &[0.1, 0.25, 0.5],
        ),
        "SING-PROP613" => cross(
            vec![th(warith(0.5)), pow(1.5), th(halfsum(0.3))],
            &[0.5, 0.75, 1.0],
        ),
        "SING-PROP616" => cross(vec![warith(0.5), halfsum(0.3)], &[0.5, 1.0]),
        "COR617" => cross(
            vec![pow(0.3), pow(0.6), pow(1.5), pow(2.0)],
            &[0.5, 1.0, 2.0],
        ),
        "FN-PROP21" => cross(
            vec![pow(0.5), warith(0.5), wharm(0.5), logmean(), geo_mix()],
            &[1.0],
        ),
        "FN-PROP22" => cross(
            vec![th(warith(0.5)), pow(1.5), th(wharm(0.5))],
            &[1.0],
        ),
        _ => Vec::new(),
    }
}

/// Builds the trial grid of a check, honoring config overrides and the
/// check's exponent domain.
pub(crate) fn cases_for(id: &str, cfg: &SuiteConfig) -> Result<Vec<TrialCase>> {
    let defaults = default_cases(id);
    let cases: Vec<TrialCase> = match (&cfg.fn_override, &cfg.p_override) {
        (None, None) => defaults,
        (Some(f), None) => {
            // Keep the default exponent grid, swap in the function.
            let mut ps: Vec<f64> = defaults.iter().map(|c| c.p).collect();
            ps.sort_by(f64::total_cmp);
            ps.dedup();
            if ps.is_empty() {
                ps.push(1.0);
            }
            cross(vec![f.clone()], &ps)
        }
        (None, Some(ps)) => {
            let mut funcs: Vec<ScalarFn> = Vec::new();
            for c in &defaults {
                if !funcs.contains(&c.func) {
                    funcs.push(c.func.clone());
                }
            }
            cross(funcs, ps)
        }
        (Some(f), Some(ps)) => cross(vec![f.clone()], ps),
    };
    Ok(cases
        .into_iter()
        .filter(|c| p_admissible(id, c.p))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn domain_filter_drops_out_of_range_overrides() {
        let cfg = SuiteConfig {
            p_override: Some(vec![5.0]),
            ..SuiteConfig::default()
        };
        let cases = cases_for("THM32-71", &cfg).unwrap();
        assert!(cases.is_empty());
        let cfg2 = SuiteConfig {
            p_override: Some(vec![1.5]),
            ..SuiteConfig::default()
        };
        assert!(!cases_for("THM32-71", &cfg2).unwrap().is_empty());
    }

    #[test]
    fn override_function_is_used() {
        let cfg = SuiteConfig {
            fn_override: Some(ScalarFn::power(-0.5)),
            p_override: Some(vec![1.5]),
            ..SuiteConfig::default()
        };
        let cases = cases_for("AH-NORM", &cfg).unwrap();
        assert_eq!(cases.len(), 1);
        assert_eq!(cases[0].func, ScalarFn::power(-0.5));
        assert_eq!(cases[0].p, 1.5);
    }
}
