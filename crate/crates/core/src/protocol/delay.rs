//! Classifying forward evidence against the honest queueing bound.

use crate::apd::correctness_delay;
use crate::error::Result;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DelayRule {
    /// Attack when `t3 - t1` exceeds `(m-1)τ + 3τ'`; otherwise a suspicion
    /// when `t3 - t_last` exceeds the queueing bound.
    #[default]
    Prose,
    /// Attack when `t3 - t_last` exceeds the queueing bound; no suspicion path.
    Pseudocode,
}

impl std::str::FromStr for DelayRule {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "prose" => Ok(DelayRule::Prose),
            "pseudocode" => Ok(DelayRule::Pseudocode),
            other => Err(format!("expected prose|pseudocode, got `{other}`")),
        }
    }
}

/// Timestamps behind one hop's forward evidence.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ForwardEvidence {
    /// First transmission to the successor.
    pub first_sent: f64,
    /// Last transmission to the successor.
    pub last_sent: f64,
    /// Stamp on the successor's forwarded copy.
    pub forwarded_at: f64,
    /// Successor's queue size `m_j`.
    pub queue_size: u32,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DelayVerdict {
    OnTime,
    /// Suspicious but within the attack threshold; carries `Z`.
    Suspected {
        correctness: f64,
    },
    Attack,
}

/// Longest honest wait in the successor's queue plus the last transmission.
pub fn queueing_bound(queue_size: u32, tau: f64, tx_delay: f64) -> f64 {
    (queue_size.max(1) - 1) as f64 * tau + tx_delay
}

pub fn attack_threshold(queue_size: u32, tau: f64, tau_prime: f64) -> f64 {
    (queue_size.max(1) - 1) as f64 * tau + 3.0 * tau_prime
}

pub fn classify_delay(
    ev: &ForwardEvidence,
    tau: f64,
    tau_prime: f64,
    tx_delay: f64,
    rule: DelayRule,
) -> Result<DelayVerdict> {
    let since_last = ev.forwarded_at - ev.last_sent;
    let bound = queueing_bound(ev.queue_size, tau, tx_delay);
    match rule {
        DelayRule::Prose => {
            if ev.forwarded_at - ev.first_sent > attack_threshold(ev.queue_size, tau, tau_prime) {
                Ok(DelayVerdict::Attack)
            } else if since_last > bound {
                let z = correctness_delay(
                    ev.forwarded_at,
                    ev.first_sent,
                    ev.queue_size,
                    tau,
                    tau_prime,
                )?;
                Ok(DelayVerdict::Suspected { correctness: z })
            } else {
                Ok(DelayVerdict::OnTime)
            }
        }
        DelayRule::Pseudocode => {
            if since_last > bound {
                Ok(DelayVerdict::Attack)
            } else {
                Ok(DelayVerdict::OnTime)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ev(elapsed: f64) -> ForwardEvidence {
        ForwardEvidence {
            first_sent: 100.0,
            last_sent: 100.0,
            forwarded_at: 100.0 + elapsed,
            queue_size: 5,
        }
    }

    #[test]
    fn prose_thresholds() {
        // m=5, τ=1, τ'=10: threshold 34.
        let c = |e| classify_delay(&ev(e), 1.0, 10.0, 0.0, DelayRule::Prose).unwrap();
        assert_eq!(c(40.0), DelayVerdict::Attack);
        match c(20.0) {
            DelayVerdict::Suspected { correctness } => {
                assert!((correctness - 20.0 / 34.0).abs() < 1e-12);
                assert!((correctness - 0.588).abs() < 1e-3);
            }
            v => panic!("{v:?}"),
        }
        assert_eq!(c(34.0), DelayVerdict::Suspected { correctness: 1.0 });
        assert_eq!(c(3.0), DelayVerdict::OnTime);
        assert_eq!(c(4.0), DelayVerdict::OnTime);
    }

    #[test]
    fn retransmission_shifts_suspicion_reference() {
        let e = ForwardEvidence {
            first_sent: 0.0,
            last_sent: 20.0,
            forwarded_at: 22.0,
            queue_size: 5,
        };
        assert_eq!(
            classify_delay(&e, 1.0, 10.0, 0.0, DelayRule::Prose).unwrap(),
            DelayVerdict::OnTime
        );
    }

    #[test]
    fn pseudocode_has_no_suspicion() {
        let c = |e| classify_delay(&ev(e), 1.0, 10.0, 0.0, DelayRule::Pseudocode).unwrap();
        assert_eq!(c(20.0), DelayVerdict::Attack);
        assert_eq!(c(4.0), DelayVerdict::OnTime);
    }
}
