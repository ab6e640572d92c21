//! Times on the command line: plain numbers or rational multiples of pi
//! such as `pi`, `pi/4`, `2pi/3`, `3*pi/2`, `-pi/6`.

use std::f64::consts::PI;

use frevival::Error;

fn bad(s: &str) -> Error {
    Error::Request(format!("cannot read time {s:?}; use a number or a form like 2pi/3"))
}

pub fn parse(s: &str) -> Result<f64, Error> {
    let t = s.trim().to_ascii_lowercase();
    if let Ok(x) = t.parse::<f64>() {
        return x.is_finite().then_some(x).ok_or_else(|| bad(s));
    }
    let (num, den) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), Some(d.trim())),
        None => (t.as_str(), None),
    };
    let coeff = num.strip_suffix("pi").ok_or_else(|| bad(s))?.trim_end_matches('*').trim();
    let coeff = match coeff {
        "" | "+" => 1.0,
        "-" => -1.0,
        c => c.parse::<f64>().map_err(|_| bad(s))?,
    };
    let den = match den {
        Some(d) => d.parse::<f64>().ok().filter(|d| *d != 0.0).ok_or_else(|| bad(s))?,
        None => 1.0,
    };
    Ok(coeff * PI / den)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reads_multiples_of_pi() {
        assert_eq!(parse("1.25").unwrap(), 1.25);
        assert_eq!(parse("pi").unwrap(), PI);
        assert_eq!(parse("pi/4").unwrap(), PI / 4.0);
        assert_eq!(parse("2pi/3").unwrap(), 2.0 * PI / 3.0);
        assert_eq!(parse("3*pi/2").unwrap(), 3.0 * PI / 2.0);
        assert_eq!(parse("-pi/6").unwrap(), -PI / 6.0);
        for junk in ["", "tau", "pi/0", "2pie", "inf"] {
            assert!(parse(junk).is_err(), "{junk}");
        }
    }
}
