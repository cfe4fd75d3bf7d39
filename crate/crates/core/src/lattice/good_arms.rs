/// Arms whose estimate is within `2 delta` of a user's estimated best.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GoodArmSet {
    pub user: usize,
    /// Global arm indices, in the order of the active arm list.
    pub arms: Vec<usize>,
}

impl GoodArmSet {
    pub fn contains(&self, arm: usize) -> bool {
        self.arms.contains(&arm)
    }

    pub fn intersects(&self, other: &GoodArmSet) -> bool {
        self.arms.iter().any(|a| other.arms.contains(a))
    }
}

/// `row[k]` is the estimate for arm `arms[k]`.
pub fn good_arm_set(user: usize, arms: &[usize], row: &[f64], delta: f64) -> GoodArmSet {
    assert_eq!(arms.len(), row.len());
    assert!(!row.is_empty(), "empty estimate row");
    let best = row.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let arms = arms
        .iter()
        .zip(row)
        .filter(|&(_, &v)| best - v <= 2.0 * delta)
        .map(|(&a, _)| a)
        .collect();
    GoodArmSet { user, arms }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn threshold_is_twice_delta() {
        let g = good_arm_set(0, &[0, 1, 2], &[1.0, 0.9, 0.5], 0.1);
        assert_eq!(g.arms, vec![0, 1]);
    }

    #[test]
    fn zero_slack_keeps_argmax() {
        let g = good_arm_set(3, &[4, 7, 9], &[0.2, 0.8, 0.1], 0.0);
        assert_eq!(g.arms, vec![7]);
    }

    #[test]
    fn equal_rows_keep_everything() {
        let g = good_arm_set(0, &[0, 1, 2, 3], &[0.5; 4], 0.0);
        assert_eq!(g.arms.len(), 4);
    }
}
