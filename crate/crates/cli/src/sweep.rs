//! Window sweeps written as CSV: `n, window_size, value_num, value_den,
//! value_decimal`.

use std::io::Write;

use anyhow::{bail, Context};
use groupgames::foelner::{defect_sweep, density_sweep, upper_banach_density, SweepPoint, WindowSpec};
use groupgames::rational::to_f64;
use groupgames::{Element, Group, PayoffFn, PredicateZ2};
use num_bigint::BigInt;

/// Parses `1,2,5` or `START..END:STEP` (inclusive), or a mix separated by
/// commas.
pub fn parse_ns(text: &str) -> anyhow::Result<Vec<u64>> {
    let mut out = Vec::new();
    for part in text.split(',') {
        let part = part.trim();
        if part.contains("..") {
            let (range, step) = part.split_once(':').unwrap_or((part, "1"));
            let (a, b) = range.split_once("..").context("range needs START..END")?;
            let (a, b, step): (u64, u64, u64) = (a.trim().parse()?, b.trim().parse()?, step.trim().parse()?);
            if step == 0 {
                bail!("step must be positive in `{part}`");
            }
            out.extend((a..=b).step_by(step as usize));
        } else {
            out.push(part.parse().with_context(|| format!("`{part}` is not a window size"))?);
        }
    }
    if out.is_empty() {
        bail!("no window sizes given");
    }
    Ok(out)
}

/// Window family names accepted by `--window`.
pub const FAMILIES: &[&str] = &["z-symmetric", "z-right", "z-left", "z2-cone", "z2-square", "q1-factorial", "finite"];

pub fn windows(family: &str, ns: &[u64], cone: Option<&PredicateZ2>) -> anyhow::Result<Vec<WindowSpec>> {
    ns.iter()
        .map(|&n| {
            Ok(match family {
                "z-symmetric" => WindowSpec::ZSymmetric(n),
                "z-right" => WindowSpec::ZRight(n),
                "z-left" => WindowSpec::ZLeft(n),
                "z2-square" => WindowSpec::Z2Square(n),
                "z2-cone" => WindowSpec::Z2Cone {
                    n,
                    cone: cone.cloned().unwrap_or_else(PredicateZ2::open_quadrant),
                },
                "q1-factorial" => WindowSpec::Q1Factorial(u32::try_from(n).context("factorial window too large")?),
                "finite" => WindowSpec::FiniteWhole,
                other => bail!("unknown window family `{other}`; expected one of {}", FAMILIES.join(", ")),
            })
        })
        .collect()
}

/// `u1,u2,v1,v2` as an open cone.
pub fn parse_cone(text: &str) -> anyhow::Result<PredicateZ2> {
    let xs: Vec<i64> = text
        .split(',')
        .map(|s| s.trim().parse::<i64>())
        .collect::<Result<_, _>>()
        .context("cone needs four integers u1,u2,v1,v2")?;
    if xs.len() != 4 {
        bail!("cone needs four integers u1,u2,v1,v2");
    }
    Ok(PredicateZ2::cone((xs[0], xs[1]), (xs[2], xs[3]))?)
}

pub fn write_csv(points: &[SweepPoint], out: impl Write) -> anyhow::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["n", "window_size", "value_num", "value_den", "value_decimal"])?;
    for p in points {
        w.write_record([
            p.n.to_string(),
            p.window_size.to_string(),
            p.value.numer().to_string(),
            p.value.denom().to_string(),
            format!("{:.12}", to_f64(&p.value)),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn density(group: &Group, phi: &PayoffFn, specs: &[WindowSpec]) -> anyhow::Result<Vec<SweepPoint>> {
    Ok(density_sweep(group, phi, specs)?)
}

pub fn defect(group: &Group, g: &Element, specs: &[WindowSpec]) -> anyhow::Result<Vec<SweepPoint>> {
    Ok(defect_sweep(group, g, specs)?)
}

/// Upper Banach density along symmetric windows; `range` defaults to `10n`.
pub fn banach(phi: &PayoffFn, ns: &[u64], range: Option<u64>) -> anyhow::Result<Vec<SweepPoint>> {
    ns.iter()
        .map(|&n| {
            let value = upper_banach_density(phi, n, range.unwrap_or(10 * n))?;
            let side = BigInt::from(2 * n + 1);
            let window_size = match phi {
                PayoffFn::Predicate(_) => &side * &side,
                _ => side,
            };
            Ok(SweepPoint { n, window_size, value })
        })
        .collect()
}
