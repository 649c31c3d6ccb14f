//! Plain CSV writers; every file starts with a header line.

use std::fmt::Write;

use crate::simulate::classify::Classifier;
use crate::error::Result;
use crate::simulate::kmc::{JumpEvent, JumpRun};
use crate::simulate::sde::SdeRun;

/// `t,i1,...,iN`.
pub fn trajectory_csv(run: &SdeRun) -> String {
    let n = run.params.n;
    let mut s = String::from("t");
    for i in 1..=n {
        let _ = write!(s, ",i{i}");
    }
    s.push('\n');
    for (t, x) in &run.trajectory {
        let _ = write!(s, "{t}");
        for v in x {
            let _ = write!(s, ",{v}");
        }
        s.push('\n');
    }
    s
}

/// `t,p,label`; `p` is empty off `B_0`.
pub fn labelled_trajectory_csv(run: &SdeRun, classifier: &Classifier) -> String {
    let mut s = String::from("t,p,label\n");
    for (t, x) in &run.trajectory {
        let l = classifier.classify(x);
        let p = l.interfaces().map(|p| p.to_string()).unwrap_or_default();
        let _ = writeln!(s, "{t},{p},{l}");
    }
    s
}

/// `t,p,label` for a jump run, replaying its exchanges.
pub fn trace_csv(run: &JumpRun) -> Result<String> {
    let mut s = String::from("t,p,label\n");
    let mut state = run.initial.clone();
    let mut t = 0.0;
    let _ = writeln!(s, "{t},{},{}", state.p, state.klass);
    for e in &run.events {
        t += e.t_wait;
        state = state.exchanged(e.site_i, e.site_j)?;
        let _ = writeln!(s, "{t},{},{}", state.p, state.klass);
    }
    Ok(s)
}

/// `t_wait,site_i,site_j,type,delta_p`.
pub fn event_log_csv(events: &[JumpEvent]) -> String {
    let mut s = String::from("t_wait,site_i,site_j,type,delta_p\n");
    for e in events {
        let _ = writeln!(s, "{},{},{},{},{}", e.t_wait, e.site_i, e.site_j, e.transition_type, e.delta_p);
    }
    s
}
