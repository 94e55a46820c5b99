// SPDX-License-Identifier: Apache-2.0

//! Standalone die yields and the effective yields seen by each carbon term.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::StackGeometry;
use crate::params::{DesignSpec, Integration, Stacking};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct YieldContext {
    pub standalone_die_y: Vec<f64>,
    pub standalone_bond_y: Vec<f64>,
    pub effective_die_y: Vec<f64>,
    /// One entry per bonding interface.
    pub effective_bond_y: Vec<f64>,
    /// RDL or interposer yield; 1.0 for designs without a substrate.
    pub substrate_y: f64,
}

/// Negative-binomial die yield `(1 + A·D0/α)^(−α)`.
pub fn die_yield_negbin(area: f64, d0: f64, alpha: f64) -> f64 {
    (-alpha * (area * d0 / alpha).ln_1p()).exp()
}

fn check_bonds(expected: usize, got: usize) -> Result<()> {
    if expected == got {
        Ok(())
    } else {
        Err(Error::CardinalityMismatch {
            what: "bond",
            expected,
            got,
        })
    }
}

/// Effective yields of a bonded 3D stack.
///
/// D2W tests dies before bonding, so each die only carries the bond losses.
/// W2W cannot, so every die and every bond carries the yield of the whole
/// stack.
pub fn compose_3d(stacking: Stacking, die_y: &[f64], bond_y: &[f64]) -> Result<YieldContext> {
    check_bonds(die_y.len().saturating_sub(1), bond_y.len())?;
    let bonds: f64 = bond_y.iter().product();
    let (effective_die_y, effective_bond_y) = match stacking {
        Stacking::W2W => {
            let stack = die_y.iter().product::<f64>() * bonds;
            (vec![stack; die_y.len()], vec![stack; bond_y.len()])
        }
        _ => (die_y.iter().map(|y| y * bonds).collect(), vec![bonds; bond_y.len()]),
    };
    Ok(YieldContext {
        standalone_die_y: die_y.to_vec(),
        standalone_bond_y: bond_y.to_vec(),
        effective_die_y,
        effective_bond_y,
        substrate_y: 1.0,
    })
}

/// Effective yields of a 2.5D design.
///
/// `substrate_y` is the standalone RDL or interposer yield. Chip-last
/// schemes take one bond per die.
pub fn compose_25d(integration: Integration, die_y: &[f64], bond_y: &[f64], substrate_y: f64) -> Result<YieldContext> {
    let mut ctx = YieldContext {
        standalone_die_y: die_y.to_vec(),
        standalone_bond_y: bond_y.to_vec(),
        effective_die_y: die_y.to_vec(),
        effective_bond_y: Vec::new(),
        substrate_y: 1.0,
    };
    match integration {
        Integration::MCM => check_bonds(0, bond_y.len())?,
        Integration::InFOChipFirst => {
            check_bonds(0, bond_y.len())?;
            ctx.effective_die_y = die_y.iter().map(|y| y * substrate_y).collect();
            ctx.substrate_y = substrate_y;
        }
        Integration::InFOChipLast | Integration::SiInterposer => {
            check_bonds(die_y.len(), bond_y.len())?;
            let bonds: f64 = bond_y.iter().product();
            ctx.effective_die_y = die_y.iter().map(|y| y * bonds).collect();
            ctx.effective_bond_y = vec![bonds; bond_y.len()];
            ctx.substrate_y = substrate_y * bonds;
        }
        other => {
            return Err(Error::UnsupportedConfiguration(format!(
                "{other} is not a 2.5D integration"
            )))
        }
    }
    Ok(ctx)
}

/// Standalone and effective yields for a design with computed geometry.
pub fn compose_for(spec: &DesignSpec, geom: &StackGeometry) -> Result<YieldContext> {
    let die_y: Vec<f64> = spec
        .dies
        .iter()
        .zip(&geom.dies)
        .map(|(d, g)| die_yield_negbin(g.total_area, d.technology.defect_density_d0, d.technology.cluster_alpha))
        .collect();
    let n = die_y.len();
    let bond = spec.bonding.bond_yield_y;
    match spec.integration {
        Integration::Mono2D => Ok(YieldContext {
            effective_die_y: die_y.clone(),
            standalone_die_y: die_y,
            standalone_bond_y: Vec::new(),
            effective_bond_y: Vec::new(),
            substrate_y: 1.0,
        }),
        Integration::M3D => {
            // tiers are built sequentially on one wafer and fail together
            let top = &spec.dies[0].technology;
            let y = die_yield_negbin(geom.total_die_area(), top.defect_density_d0, top.cluster_alpha);
            Ok(YieldContext {
                standalone_die_y: vec![y; n],
                standalone_bond_y: Vec::new(),
                effective_die_y: vec![y; n],
                effective_bond_y: Vec::new(),
                substrate_y: 1.0,
            })
        }
        Integration::Micro3D | Integration::Hybrid3D => compose_3d(spec.stacking, &die_y, &vec![bond; n - 1]),
        Integration::MCM => compose_25d(spec.integration, &die_y, &[], 1.0),
        Integration::InFOChipFirst => compose_25d(spec.integration, &die_y, &[], spec.bonding.rdl_yield_y),
        Integration::InFOChipLast => compose_25d(spec.integration, &die_y, &vec![bond; n], spec.bonding.rdl_yield_y),
        Integration::SiInterposer => {
            let y_sub = match spec.bonding.interposer_yield_y {
                Some(y) => y,
                None => {
                    let ip = spec.interposer.as_ref().ok_or_else(|| Error::MissingField {
                        path: "design.interposer".into(),
                    })?;
                    die_yield_negbin(
                        geom.substrate_area,
                        ip.technology.defect_density_d0,
                        ip.technology.cluster_alpha,
                    )
                }
            };
            compose_25d(spec.integration, &die_y, &vec![bond; n], y_sub)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() < 1e-12
    }

    #[test]
    fn negbin_examples() {
        // (1 + 1/30)^-3
        assert!((die_yield_negbin(1.0, 0.1, 3.0) - 0.906_313_987_4).abs() < 1e-9);
        assert_eq!(die_yield_negbin(5.0, 0.0, 3.0), 1.0);
        assert_eq!(die_yield_negbin(0.0, 0.3, 3.0), 1.0);
    }

    #[test]
    fn d2w_and_w2w_examples() {
        let d2w = compose_3d(Stacking::D2W, &[0.9, 0.9], &[0.95]).unwrap();
        assert!(d2w.effective_die_y.iter().all(|&y| close(y, 0.855)));
        assert!(close(d2w.effective_bond_y[0], 0.95));
        let w2w = compose_3d(Stacking::W2W, &[0.9, 0.9], &[0.95]).unwrap();
        assert!(w2w.effective_die_y.iter().all(|&y| close(y, 0.7695)));
        assert!(close(w2w.effective_bond_y[0], 0.7695));
    }

    #[test]
    fn perfect_yields_stay_perfect() {
        for s in [Stacking::D2W, Stacking::W2W] {
            let c = compose_3d(s, &[1.0; 3], &[1.0; 2]).unwrap();
            assert!(c.effective_die_y.iter().chain(&c.effective_bond_y).all(|&y| y == 1.0));
        }
        for integ in [Integration::MCM, Integration::InFOChipFirst] {
            let c = compose_25d(integ, &[1.0; 2], &[], 1.0).unwrap();
            assert!(c.effective_die_y.iter().all(|&y| y == 1.0));
            assert_eq!(c.substrate_y, 1.0);
        }
        let c = compose_25d(Integration::SiInterposer, &[1.0; 2], &[1.0; 2], 1.0).unwrap();
        assert!(c.effective_die_y.iter().chain(&c.effective_bond_y).all(|&y| y == 1.0));
    }

    #[test]
    fn bond_count_is_checked() {
        assert!(matches!(
            compose_3d(Stacking::D2W, &[0.9, 0.9], &[0.9, 0.9]),
            Err(Error::CardinalityMismatch {
                expected: 1,
                got: 2,
                ..
            })
        ));
        assert!(matches!(
            compose_25d(Integration::InFOChipLast, &[0.9, 0.9], &[0.9], 0.9),
            Err(Error::CardinalityMismatch {
                expected: 2,
                got: 1,
                ..
            })
        ));
    }

    #[test]
    fn chip_first_example() {
        let c = compose_25d(Integration::InFOChipFirst, &[0.9], &[], 0.98).unwrap();
        assert!(close(c.effective_die_y[0], 0.882));
        assert!(close(c.substrate_y, 0.98));
        assert!(c.effective_bond_y.is_empty());
    }

    #[test]
    fn chip_last_example() {
        let c = compose_25d(Integration::InFOChipLast, &[0.9, 0.9], &[0.99, 0.99], 0.95).unwrap();
        assert!(c.effective_die_y.iter().all(|&y| close(y, 0.88209)));
        assert!(close(c.substrate_y, 0.931095));
        assert!(c.effective_bond_y.iter().all(|&y| close(y, 0.9801)));
    }

    #[test]
    fn mcm_is_identity() {
        let c = compose_25d(Integration::MCM, &[0.9, 0.8], &[], 1.0).unwrap();
        assert_eq!(c.effective_die_y, vec![0.9, 0.8]);
    }

    proptest! {
        #[test]
        fn poisson_limit(a in 0.0f64..1.0, d0 in 0.0f64..1.0) {
            prop_assume!(a * d0 <= 1.0);
            prop_assert!((die_yield_negbin(a, d0, 1e6) - (-a * d0).exp()).abs() < 1e-4);
        }

        #[test]
        fn negbin_monotone(a in 0.0f64..10.0, da in 0.0f64..10.0, d0 in 0.0f64..2.0, dd in 0.0f64..2.0,
                           alpha in 0.1f64..50.0, dalpha in 0.0f64..50.0) {
            let y = die_yield_negbin(a, d0, alpha);
            prop_assert!(y > 0.0 && y <= 1.0);
            prop_assert!(die_yield_negbin(a + da, d0, alpha) <= y);
            prop_assert!(die_yield_negbin(a, d0 + dd, alpha) <= y);
            // stronger clustering (smaller alpha) concentrates defects on fewer dies
            prop_assert!(die_yield_negbin(a, d0, alpha + dalpha) <= y * (1.0 + 1e-12));
        }

        #[test]
        fn w2w_never_beats_d2w(dies in proptest::collection::vec(0.01f64..=1.0, 2..6), bond in 0.01f64..=1.0) {
            let bonds = vec![bond; dies.len() - 1];
            let d2w = compose_3d(Stacking::D2W, &dies, &bonds).unwrap();
            let w2w = compose_3d(Stacking::W2W, &dies, &bonds).unwrap();
            for (w, d) in w2w.effective_die_y.iter().zip(&d2w.effective_die_y) {
                prop_assert!(w <= d);
                if dies.iter().any(|&y| y < 1.0) {
                    prop_assert!(w < d);
                }
            }
        }

        #[test]
        fn composition_bounds(dies in proptest::collection::vec(0.01f64..=1.0, 2..6),
                              bond in 0.01f64..=1.0, sub in 0.01f64..=1.0, which in 0usize..6) {
            let n = dies.len();
            let ctx = match which {
                0 => compose_3d(Stacking::D2W, &dies, &vec![bond; n - 1]).unwrap(),
                1 => compose_3d(Stacking::W2W, &dies, &vec![bond; n - 1]).unwrap(),
                2 => compose_25d(Integration::MCM, &dies, &[], 1.0).unwrap(),
                3 => compose_25d(Integration::InFOChipFirst, &dies, &[], sub).unwrap(),
                4 => compose_25d(Integration::InFOChipLast, &dies, &vec![bond; n], sub).unwrap(),
                _ => compose_25d(Integration::SiInterposer, &dies, &vec![bond; n], sub).unwrap(),
            };
            for (e, s) in ctx.effective_die_y.iter().zip(&ctx.standalone_die_y) {
                prop_assert!(*e > 0.0 && e <= s);
            }
            for e in &ctx.effective_bond_y {
                prop_assert!(*e > 0.0 && *e <= bond);
            }
            prop_assert!(ctx.substrate_y > 0.0 && ctx.substrate_y <= 1.0);
        }
    }
}
