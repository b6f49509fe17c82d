### Script description ###
# This script generates a synthetic voyage log and matching hindcast weather file from the simulator,
# for checking the validation harness end to end without recorded data.
#
### End of Description ###

##################
# Version Control
#
#  v1.1, add heading bias and anemometer columns
#
##################
# Change logs
# v1.0, initial version
# v1.1, add heading bias and anemometer columns
### Load Python module ###
import argparse
import logging
import os
import sys

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from helmsim.config import load_config
from helmsim.dynamics import ShipState
from helmsim.errors import HelmsimError
from helmsim.logging import setup_logging
from helmsim.maneuvers import KNOT
from helmsim.synthetic import steady_environment, synthesize_voyage, write_voyage, write_weather, zigzag_controls
from helmsim.time import exec_timestamp, parse_timestamps
### End of module load ###


### Function declaration ###
def parse_args(f_argv=None):
    f_parser = argparse.ArgumentParser(description="Generate a synthetic voyage and weather CSV pair")
    f_parser.add_argument("--config", required=True, help="Vessel configuration JSON")
    f_parser.add_argument("--out-dir", required=True, help="Directory for voyage_synthetic.csv and weather_synthetic.csv")
    f_parser.add_argument("--duration", type=int, default=3600, help="Voyage length, s")
    f_parser.add_argument("--start", default="2024-05-01T06:00:00Z", help="Timestamp of the first record")
    f_parser.add_argument("--lat", type=float, default=34.65, help="Latitude of the first fix, deg")
    f_parser.add_argument("--lon", type=float, default=135.20, help="Longitude of the first fix, deg")
    f_parser.add_argument("--speed-kn", type=float, default=6.0, help="Initial speed, knots")
    f_parser.add_argument("--rpm", type=float, default=106.0, help="Propeller rate, RPM")
    f_parser.add_argument("--rudder-deg", type=float, default=5.0, help="Zig-zag rudder amplitude, deg")
    f_parser.add_argument("--period", type=float, default=240.0, help="Zig-zag period, s")
    f_parser.add_argument("--wind", type=float, nargs=2, default=(6.0, 45.0), metavar=("SPEED", "FROM_DEG"))
    f_parser.add_argument("--current", type=float, nargs=2, default=(0.3, 90.0), metavar=("SPEED", "TO_DEG"))
    f_parser.add_argument("--waves", type=float, nargs=2, default=(1.0, 20.0), metavar=("HS", "FROM_DEG"))
    f_parser.add_argument("--heading-bias-deg", type=float, default=0.0, help="Error added to the logged heading")
    f_parser.add_argument("--anemometer", action="store_true", help="Add anemometer columns")
    f_parser.add_argument("--log-file", help="Log file")
    return f_parser.parse_args(f_argv)


def main(f_argv=None):
    f_args = parse_args(f_argv)
    setup_logging(f_args.log_file)
    start_timestamp = exec_timestamp()
    try:
        f_cfg = load_config(f_args.config)
        f_start_epoch = float(parse_timestamps([f_args.start])[0])
        f_env = steady_environment(
            wind_speed=f_args.wind[0], wind_from_deg=f_args.wind[1],
            wave_height=f_args.waves[0], wave_from_deg=f_args.waves[1],
            current_speed=f_args.current[0], current_to_deg=f_args.current[1],
            duration=f_args.duration,
        )
        f_controls = zigzag_controls(f_args.duration, f_args.rudder_deg, f_args.rpm, f_args.period)
        f_records = synthesize_voyage(
            f_cfg, ShipState(u=f_args.speed_kn * KNOT), f_controls, f_env, f_args.duration,
            f_start_epoch, f_args.lat, f_args.lon,
            heading_bias_deg=f_args.heading_bias_deg, with_anemometer=f_args.anemometer,
        )
    except HelmsimError as f_error:
        logging.error(f"Synthetic voyage failed. Error: {f_error}")
        return 2
    os.makedirs(f_args.out_dir, exist_ok=True)
    write_voyage(f_records, os.path.join(f_args.out_dir, "voyage_synthetic.csv"))
    write_weather(f_env, f_start_epoch, os.path.join(f_args.out_dir, "weather_synthetic.csv"))
    logging.info(f"Synthetic voyage written to {f_args.out_dir} in {exec_timestamp() - start_timestamp:.1f} s")
    return 0

### End of Function declaration ###


### Main body start ###
if __name__ == "__main__":
    sys.exit(main())
