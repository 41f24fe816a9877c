x = 1
   
