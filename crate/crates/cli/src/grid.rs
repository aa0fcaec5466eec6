//! Parameter grids: `a,b,c` lists or `start:stop:log10|linear[,count]`.

const DEFAULT_COUNT: usize = 9;

pub fn parse_grid(text: &str) -> Result<Vec<f64>, String> {
    let text = text.trim();
    if !text.contains(':') {
        return text
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<f64>()
                    .map_err(|_| format!("'{t}' is not a number"))
            })
            .collect();
    }
    let parts: Vec<&str> = text.split(':').collect();
    if parts.len() != 3 {
        return Err(format!(
            "grid '{text}' must look like start:stop:log10|linear[,count]"
        ));
    }
    let number = |s: &str| {
        s.trim()
            .parse::<f64>()
            .map_err(|_| format!("'{s}' is not a number"))
    };
    let (start, stop) = (number(parts[0])?, number(parts[1])?);
    let (scale, count) = match parts[2].split_once(',') {
        Some((scale, count)) => (
            scale.trim(),
            count
                .trim()
                .parse::<usize>()
                .map_err(|_| format!("'{count}' is not a point count"))?,
        ),
        None => (parts[2].trim(), DEFAULT_COUNT),
    };
    if count == 0 {
        return Err("a grid needs at least one point".into());
    }
    let at = |i: usize| {
        if count == 1 {
            0.0
        } else {
            i as f64 / (count - 1) as f64
        }
    };
    match scale {
        "linear" => Ok((0..count).map(|i| start + (stop - start) * at(i)).collect()),
        "log10" => {
            if start <= 0.0 || stop <= 0.0 {
                return Err("log10 grids need positive end points".into());
            }
            let (a, b) = (start.log10(), stop.log10());
            Ok((0..count)
                .map(|i| match i {
                    0 => start,
                    i if i + 1 == count => stop,
                    i => 10f64.powf(a + (b - a) * at(i)),
                })
                .collect())
        }
        other => Err(format!(
            "unknown grid scale '{other}' (expected log10 or linear)"
        )),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lists_and_ranges() {
        assert_eq!(
            parse_grid("0.999,0.995, 0.99").unwrap(),
            vec![0.999, 0.995, 0.99]
        );
        let g = parse_grid("0.001:0.1:log10,3").unwrap();
        assert_eq!(g.len(), 3);
        assert_eq!(g[0], 0.001);
        assert!((g[1] - 0.01).abs() < 1e-15);
        assert_eq!(g[2], 0.1);
        assert_eq!(parse_grid("0.001:0.1:log10").unwrap().len(), DEFAULT_COUNT);
        assert_eq!(
            parse_grid("0:1:linear,5").unwrap(),
            vec![0.0, 0.25, 0.5, 0.75, 1.0]
        );
    }

    #[test]
    fn malformed_grids() {
        assert!(parse_grid("a,b").is_err());
        assert!(parse_grid("0:1:cubic,3").is_err());
        assert!(parse_grid("0:1:log10,3").is_err());
        assert!(parse_grid("0:1").is_err());
        assert!(parse_grid("0.1:1:linear,0").is_err());
    }
}
