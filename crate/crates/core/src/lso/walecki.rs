use super::Ordering;

/// `ceil(n / 2)` orderings of `0..n` in which every pair is adjacent at
/// least once.
///
/// For even `n` ordering `i` is the zig-zag `i, i+1, i-1, i+2, i-2, ..`
/// taken mod `n`; these Hamiltonian paths split the edges of `K_n`. Odd `n`
/// borrows a phantom element that is deleted afterwards.
pub fn walecki_orderings(n: usize) -> Vec<Ordering> {
    assert!(n >= 1, "walecki_orderings needs n >= 1");
    let even = n + n % 2;
    (0..even / 2)
        .map(|i| {
            let mut order = Vec::with_capacity(even);
            order.push(i);
            for step in 1..=even / 2 {
                order.push((i + step) % even);
                if step < even / 2 {
                    order.push((i + even - step) % even);
                }
            }
            order.retain(|&x| x < n);
            order
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn all_adjacent(n: usize, orders: &[Ordering]) -> bool {
        let mut seen = vec![false; n * n];
        for o in orders {
            assert_eq!(o.len(), n);
            for w in o.windows(2) {
                seen[w[0] * n + w[1]] = true;
                seen[w[1] * n + w[0]] = true;
            }
        }
        (0..n).all(|a| (a + 1..n).all(|b| seen[a * n + b]))
    }

    #[test]
    fn small_cases() {
        assert_eq!(walecki_orderings(1), vec![vec![0]]);
        assert_eq!(walecki_orderings(2), vec![vec![0, 1]]);
        let four = walecki_orderings(4);
        assert_eq!(four.len(), 2);
        assert!(all_adjacent(4, &four));
        assert_eq!(walecki_orderings(5).len(), 3);
    }

    #[test]
    fn every_pair_adjacent_up_to_64() {
        for n in 2..=64 {
            let orders = walecki_orderings(n);
            assert_eq!(orders.len(), n.div_ceil(2));
            assert!(all_adjacent(n, &orders), "n={n}");
        }
    }
}
