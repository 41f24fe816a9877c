do_one(); do_two(); do_three()
do_four();
do_five() ;
if x: y(); z()
import os; import sys
