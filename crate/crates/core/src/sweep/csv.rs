use std::io::Write;

use super::{Extremum, SweepResult};
use crate::error::Result;

/// Scientific notation with 17 significant digits; parses back to the same
/// `f64` bit pattern.
pub fn format_sig17(x: f64) -> String {
    format!("{x:.16e}")
}

fn extremum_lines(out: &mut Vec<u8>, label: &str, e: &Option<Extremum>) -> std::io::Result<()> {
    if let Some(e) = e {
        writeln!(out, "# {label}_param={}", format_sig17(e.param))?;
        writeln!(out, "# {label}_value={}", format_sig17(e.value))?;
        writeln!(out, "# {label}_refined_param={}", format_sig17(e.refined_param))?;
        writeln!(out, "# {label}_refined_value={}", format_sig17(e.refined_value))?;
    }
    Ok(())
}

/// Writes `# key=value` metadata lines, the `param,value` header and one line
/// per row. Output bytes depend only on `res`.
pub fn emit_csv<W: Write>(res: &SweepResult, mut sink: W) -> Result<()> {
    let mut out = Vec::with_capacity(40 * (res.rows.len() + 20));
    for (key, value) in &res.metadata {
        writeln!(out, "# {key}={value}")?;
    }
    extremum_lines(&mut out, "argmax", &res.argmax)?;
    extremum_lines(&mut out, "argmin", &res.argmin)?;
    writeln!(out, "param,value")?;
    for &(x, y) in &res.rows {
        writeln!(out, "{},{}", format_sig17(x), format_sig17(y))?;
    }
    sink.write_all(&out)?;
    sink.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sweep::SweepParam;

    fn result(rows: Vec<(f64, f64)>) -> SweepResult {
        SweepResult {
            param: SweepParam::Adoption,
            quantity: "loss",
            rows,
            argmax: None,
            argmin: None,
            metadata: vec![("rE".into(), format_sig17(1.0))],
        }
    }

    fn parse_rows(text: &str) -> Vec<(f64, f64)> {
        text.lines()
            .skip_while(|l| *l != "param,value")
            .skip(1)
            .map(|l| {
                let (a, b) = l.split_once(',').unwrap();
                (a.parse().unwrap(), b.parse().unwrap())
            })
            .collect()
    }

    #[test]
    fn two_rows_two_data_lines() {
        let mut buf = Vec::new();
        emit_csv(&result(vec![(0.0, 1.0), (1.0, 2.0)]), &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("# rE=1.0000000000000000e0\n"));
        assert_eq!(text.lines().skip_while(|l| *l != "param,value").count(), 3);
    }

    #[test]
    fn round_trip_is_exact() {
        let rows = vec![
            (0.1, 1.0 / 3.0),
            (0.2, std::f64::consts::PI * 1e-300),
            (0.30000000000000004, -2.5e17),
            (1.0, f64::MIN_POSITIVE),
        ];
        let mut buf = Vec::new();
        emit_csv(&result(rows.clone()), &mut buf).unwrap();
        let parsed = parse_rows(std::str::from_utf8(&buf).unwrap());
        assert_eq!(parsed.len(), rows.len());
        for (a, b) in parsed.iter().zip(&rows) {
            assert_eq!(a.0.to_bits(), b.0.to_bits());
            assert_eq!(a.1.to_bits(), b.1.to_bits());
        }
    }

    #[test]
    fn re_emission_is_byte_identical() {
        let res = result(vec![(0.0, 0.5), (0.5, 0.25), (1.0, 0.0)]);
        let mut a = Vec::new();
        let mut b = Vec::new();
        emit_csv(&res, &mut a).unwrap();
        emit_csv(&res, &mut b).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn write_failure_surfaces() {
        struct Broken;
        impl Write for Broken {
            fn write(&mut self, _: &[u8]) -> std::io::Result<usize> {
                Err(std::io::Error::other("disk full"))
            }
            fn flush(&mut self) -> std::io::Result<()> {
                Ok(())
            }
        }
        let err = emit_csv(&result(vec![(0.0, 0.0)]), Broken).unwrap_err();
        assert!(matches!(err, crate::error::Error::Io(_)));
    }
}
