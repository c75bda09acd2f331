//! Shared fixtures for the criterion benches.

use hodyn_core::game::MixedProfile;

pub fn interior_start() -> MixedProfile {
    MixedProfile::new(vec![vec![0.55, 0.45], vec![0.4, 0.6]]).unwrap()
}
