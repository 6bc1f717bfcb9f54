use std::fmt;

use crate::error::{Error, Result};

/// An integer partition: weakly decreasing sequence of positive parts
/// (possibly empty).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Partition {
    parts: Vec<u64>,
}

impl Partition {
    pub fn new(parts: Vec<u64>) -> Self {
        assert!(
            parts.windows(2).all(|w| w[0] >= w[1]) && parts.iter().all(|&p| p > 0),
            "parts must be weakly decreasing and positive"
        );
        Partition { parts }
    }

    pub fn empty() -> Self {
        Partition { parts: Vec::new() }
    }

    pub fn parts(&self) -> &[u64] {
        &self.parts
    }

    pub fn size(&self) -> u64 {
        self.parts.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// Frobenius coordinates `(alpha | beta)`: arm and leg lengths of the
    /// diagonal hooks, both strictly decreasing and of equal length.
    pub fn frobenius(&self) -> (Vec<u64>, Vec<u64>) {
        let mut alpha = Vec::new();
        let mut beta = Vec::new();
        for (i, &p) in self.parts.iter().enumerate() {
            let i = i as u64;
            if p <= i {
                break;
            }
            alpha.push(p - i - 1);
            // leg: number of rows below row i with part > i
            let leg = self.parts[i as usize + 1..].iter().filter(|&&q| q > i).count() as u64;
            beta.push(leg);
        }
        (alpha, beta)
    }

    /// Frobenius printout, e.g. `(3,1|1,0)` for the partition `4,3`.
    pub fn frobenius_string(&self) -> String {
        let (alpha, beta) = self.frobenius();
        let fmt_seq = |v: &[u64]| v.iter().map(u64::to_string).collect::<Vec<_>>().join(",");
        format!("({}|{})", fmt_seq(&alpha), fmt_seq(&beta))
    }

    /// Occupied charged positions, doubled to stay integral: the set
    /// `{2 (lambda_i - i) + 1 : i >= 1}`, truncated after `extra` unoccupied
    /// trailing slots. Position `p/2` occupied means the Maya diagram has a
    /// particle there.
    fn doubled_positions(&self, extra: usize) -> Vec<i64> {
        let n = self.parts.len() + extra;
        (0..n)
            .map(|i| {
                let p = self.parts.get(i).copied().unwrap_or(0) as i64;
                2 * (p - i as i64) - 1
            })
            .collect()
    }

    fn from_doubled_positions(mut pos: Vec<i64>) -> Self {
        pos.sort_unstable_by(|a, b| b.cmp(a));
        let parts: Vec<u64> = pos
            .iter()
            .enumerate()
            .map(|(i, &p)| (p + 1) / 2 + i as i64)
            .take_while(|&p| p > 0)
            .map(|p| p as u64)
            .collect();
        Partition::new(parts)
    }

    /// All distinct ways of adding an `m`-ribbon, with sign and centre.
    pub fn add_ribbons(&self, m: u64) -> Vec<Ribbon> {
        assert!(m >= 1);
        let m2 = 2 * m as i64;
        let pos = self.doubled_positions(m as usize);
        let mut out = Vec::new();
        for (idx, &p) in pos.iter().enumerate() {
            if pos.contains(&(p + m2)) {
                continue;
            }
            // occupied positions strictly between p and p + 2m give the height
            let height = pos.iter().filter(|&&q| q > p && q < p + m2).count();
            let mut newpos = pos.clone();
            newpos[idx] = p + m2;
            out.push(Ribbon {
                size: m,
                sign: if height % 2 == 0 { 1 } else { -1 },
                doubled_centre: p + m as i64,
                partition: Partition::from_doubled_positions(newpos),
            });
        }
        out.sort_by_key(|r| r.doubled_centre);
        out
    }

    /// All distinct ways of removing an `m`-ribbon, with sign and centre.
    pub fn remove_ribbons(&self, m: u64) -> Vec<Ribbon> {
        assert!(m >= 1);
        let m2 = 2 * m as i64;
        let pos = self.doubled_positions(m as usize);
        // every position below the listed window is occupied
        let min_listed = pos.last().copied().unwrap_or(-1);
        let mut out = Vec::new();
        for (idx, &p) in pos.iter().enumerate() {
            if p - m2 < min_listed || pos.contains(&(p - m2)) {
                continue;
            }
            let height = pos.iter().filter(|&&q| q > p - m2 && q < p).count();
            let mut newpos = pos.clone();
            newpos[idx] = p - m2;
            out.push(Ribbon {
                size: m,
                sign: if height % 2 == 0 { 1 } else { -1 },
                doubled_centre: p - m as i64,
                partition: Partition::from_doubled_positions(newpos),
            });
        }
        out.sort_by_key(|r| r.doubled_centre);
        out
    }

    /// All partitions of `n`, in lexicographically decreasing order.
    pub fn all_of_size(n: u64) -> Vec<Partition> {
        fn rec(remaining: u64, max_part: u64, prefix: &mut Vec<u64>, out: &mut Vec<Partition>) {
            if remaining == 0 {
                out.push(Partition::new(prefix.clone()));
                return;
            }
            for p in (1..=remaining.min(max_part)).rev() {
                prefix.push(p);
                rec(remaining - p, p, prefix, out);
                prefix.pop();
            }
        }
        let mut out = Vec::new();
        rec(n, n, &mut Vec::new(), &mut out);
        out
    }

    /// Parses the comma-separated text form, e.g. `"4,3"`; whitespace is
    /// ignored and the empty string denotes the empty partition.
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() {
            return Ok(Partition::empty());
        }
        let mut parts = Vec::new();
        for (i, tok) in s.split(',').enumerate() {
            let p: u64 = tok.trim().parse().map_err(|_| Error::Parse {
                position: i,
                message: format!("invalid part {tok:?}"),
            })?;
            if p == 0 {
                return Err(Error::Parse { position: i, message: "parts must be positive".into() });
            }
            parts.push(p);
        }
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Ok(Partition::new(parts))
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.parts.is_empty() {
            return write!(f, "[]");
        }
        let s = self.parts.iter().map(u64::to_string).collect::<Vec<_>>().join(",");
        write!(f, "{s}")
    }
}

/// An `m`-ribbon addition or removal: the sign `(-1)^height`, the centre of
/// mass of the ribbon cells (stored doubled so it stays an integer), and the
/// resulting partition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ribbon {
    pub size: u64,
    pub sign: i8,
    pub doubled_centre: i64,
    pub partition: Partition,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(parts: &[u64]) -> Partition {
        Partition::new(parts.to_vec())
    }

    #[test]
    fn frobenius_examples() {
        assert_eq!(p(&[4, 3]).frobenius(), (vec![3, 1], vec![1, 0]));
        assert_eq!(p(&[4, 3]).frobenius_string(), "(3,1|1,0)");
        assert_eq!(Partition::empty().frobenius(), (vec![], vec![]));
        assert_eq!(p(&[1]).frobenius(), (vec![0], vec![0]));
        assert_eq!(p(&[2, 2]).frobenius(), (vec![1, 0], vec![1, 0]));
    }

    #[test]
    fn add_three_ribbons_to_43() {
        let ribbons = p(&[4, 3]).add_ribbons(3);
        let got: Vec<(i8, i64, Vec<u64>)> = ribbons
            .iter()
            .map(|r| (r.sign, r.doubled_centre, r.partition.parts().to_vec()))
            .collect();
        assert_eq!(
            got,
            vec![
                (1, -6, vec![4, 3, 1, 1, 1]),
                (-1, -4, vec![4, 3, 2, 1]),
                (1, -2, vec![4, 3, 3]),
                (-1, 6, vec![5, 5]),
                (1, 10, vec![7, 3]),
            ]
        );
    }

    #[test]
    fn remove_three_ribbons_from_43() {
        let ribbons = p(&[4, 3]).remove_ribbons(3);
        let got: Vec<(i8, i64, Vec<u64>)> = ribbons
            .iter()
            .map(|r| (r.sign, r.doubled_centre, r.partition.parts().to_vec()))
            .collect();
        assert_eq!(got, vec![(1, 0, vec![4]), (-1, 4, vec![2, 2])]);
    }

    #[test]
    fn hooks_of_the_empty_partition() {
        // every m-ribbon addable to the empty diagram is a hook, with centres
        // (m-1)/2 - j and alternating signs
        for m in 1..=6u64 {
            let ribbons = Partition::empty().add_ribbons(m);
            assert_eq!(ribbons.len(), m as usize);
            for (j, r) in ribbons.iter().rev().enumerate() {
                assert_eq!(r.doubled_centre, (m as i64 - 1) - 2 * j as i64);
                assert_eq!(r.sign, if j % 2 == 0 { 1 } else { -1 });
                assert_eq!(r.partition.size(), m);
            }
        }
        assert!(Partition::empty().remove_ribbons(3).is_empty());
        let one = Partition::empty().add_ribbons(1);
        assert_eq!(one.len(), 1);
        assert_eq!(one[0].partition, p(&[1]));
        assert_eq!(one[0].doubled_centre, 0);
        assert_eq!(one[0].sign, 1);
        let back = p(&[1]).remove_ribbons(1);
        assert_eq!(back.len(), 1);
        assert_eq!(back[0].partition, Partition::empty());
    }

    #[test]
    fn removal_inverts_addition() {
        for n in 0..=8u64 {
            for lam in Partition::all_of_size(n) {
                for m in 1..=6u64 {
                    let added = lam.add_ribbons(m);
                    // mutually distinct results
                    for (i, a) in added.iter().enumerate() {
                        assert_eq!(a.partition.size(), n + m);
                        for b in &added[i + 1..] {
                            assert_ne!(a.partition, b.partition);
                        }
                        // the reverse removal exists with the same sign and centre
                        let inverse = a.partition.remove_ribbons(m);
                        let r = inverse
                            .iter()
                            .find(|r| r.partition == lam)
                            .expect("removal must invert addition");
                        assert_eq!(r.sign, a.sign);
                        assert_eq!(r.doubled_centre, a.doubled_centre);
                    }
                }
            }
        }
    }

    #[test]
    fn parse_and_display() {
        assert_eq!(Partition::parse("4,3").unwrap(), p(&[4, 3]));
        assert_eq!(Partition::parse(" 1, 2 ,2").unwrap(), p(&[2, 2, 1]));
        assert_eq!(Partition::parse("").unwrap(), Partition::empty());
        assert!(Partition::parse("2,0").is_err());
        assert!(Partition::parse("x").is_err());
        assert_eq!(p(&[4, 3]).to_string(), "4,3");
    }

    #[test]
    fn partition_counts() {
        let counts: Vec<usize> = (0..=8).map(|n| Partition::all_of_size(n).len()).collect();
        assert_eq!(counts, vec![1, 1, 2, 3, 5, 7, 11, 15, 22]);
    }
}
