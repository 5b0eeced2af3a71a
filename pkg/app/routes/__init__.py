# HTTP routers: brackets.py (curve queries) and scans.py (scan reports)
