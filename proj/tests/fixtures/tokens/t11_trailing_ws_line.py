x = 1
   