### Script description ###
# This script runs the voyage validation batch on every voyage log in the data directory
# and keeps a dated copy of the report next to the latest one.
#
### End of Description ###

##################
# Version Control
#
#  v1.0
#
##################
# Change logs
# v1.0, initial version
### Load Python module ###
import os
import shutil
import sys
from datetime import datetime

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from helmsim.cli import main as helmsim_main
### End of module load ###


### Main body start ###
# Declare paths, overridable from the environment
data_path = os.getenv("HELMSIM_DATA", "/var/helmsim/data")
output_path = os.getenv("HELMSIM_OUTPUT", "/var/helmsim/output")
config_file = os.getenv("HELMSIM_CONFIG", "/app/config/trainer_synthetic.json")
log_file = os.getenv("HELMSIM_LOG", "/var/log/helmsim/batch_validate.log")
#
os.makedirs(output_path, exist_ok=True)
os.makedirs(os.path.dirname(log_file), exist_ok=True)
run_dir = os.path.join(output_path, "latest")
exit_code = helmsim_main([
    "--log-file", log_file, "--quiet",
    "validate", os.path.join(data_path, "voyage_*.csv"),
    "--weather", os.path.join(data_path, "weather.csv"),
    "--config", config_file,
    "--out", run_dir,
])
# Keep a dated copy of the report
if exit_code == 0:
    dated_report = os.path.join(output_path, f"report_{datetime.now().strftime('%Y%m%d')}.json")
    shutil.copyfile(os.path.join(run_dir, "report.json"), dated_report)
    os.chmod(dated_report, 0o644)
sys.exit(exit_code)
