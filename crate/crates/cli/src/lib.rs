//! Job-file front end for `wildram`.

pub mod job;
pub mod run;

pub use job::{parse_job, Command, JobError, JobSpec};
pub use run::{
    exit_code, run, run_suite, RunError, EXIT_DISCREPANCY, EXIT_ERROR, EXIT_OK, EXIT_UNDETERMINED,
};
